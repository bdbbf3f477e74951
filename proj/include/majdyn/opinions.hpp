#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "majdyn/graph.hpp"
#include "majdyn/opinion_vector.hpp"

namespace majdyn {

/// Each coordinate independently ±1 with probability 1/2.
struct UniformRandom {
    friend bool operator==(const UniformRandom&, const UniformRandom&) = default;
};

/// Exactly (n + d) / 2 positives at uniformly random positions.
struct FixedDiscrepancy {
    std::int64_t d = 0;
    friend bool operator==(const FixedDiscrepancy&, const FixedDiscrepancy&) = default;
};

/// Balanced morning assignment plus round(c * sqrt(n)) swing vertices.
struct MorningEvening {
    double c = 1.0;
    friend bool operator==(const MorningEvening&, const MorningEvening&) = default;
};

using OpinionModel = std::variant<UniformRandom, FixedDiscrepancy, MorningEvening>;

OpinionVector sample_uniform(std::size_t n, std::uint64_t seed);

/// Exactly ceil(n/2) positives, uniform over all such assignments.
OpinionVector sample_morning(std::size_t n, std::uint64_t seed);

/// Exactly (n + d) / 2 positives. Throws if |d| > n or d and n differ in parity.
OpinionVector sample_fixed_discrepancy(std::size_t n, std::int64_t d, std::uint64_t seed);

/// round(c * sqrt(n)), half away from zero.
std::size_t swing_count(std::size_t n, double c);

struct SwingResult {
    OpinionVector evening;
    /// Sorted ascending.
    std::vector<Vertex> swing_set;
};

/// Flips a uniformly random swing_count(n, c)-subset of the negative
/// coordinates of r0 to +1.
SwingResult apply_swing(const OpinionVector& r0, double c, std::uint64_t seed);

struct CensusReport {
    double gamma = 0.0;
    std::uint64_t almost_positive = 0;
    std::uint64_t unstable = 0;
    std::uint64_t unstable_with_swing = 0;
    /// almost_positive - ceil(n/2).
    std::int64_t excess = 0;

    friend bool operator==(const CensusReport&, const CensusReport&) = default;
};

/// Vertex census of one instance.
///
/// With r1 = majority_step(g, r0):
///  - almost_positive counts v whose r1 neighbor sum exceeds -gamma * p^{3/2} * n
///    (strict, using the nominal p);
///  - unstable counts w whose r0 neighbor sum is exactly zero;
///  - unstable_with_swing counts unstable vertices adjacent to a swing vertex.
CensusReport census(const Graph& g, const OpinionVector& r0, std::span<const Vertex> swing_set, double gamma,
                    double p);

/// Bias on day 2 of the evening trajectory: morning opinion, swing with c,
/// then two majority steps.
std::int64_t day2_bias_experiment(const Graph& g, double c, std::uint64_t seed);

}  // namespace majdyn
