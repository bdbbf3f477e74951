#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "majdyn/graph.hpp"
#include "majdyn/opinion_vector.hpp"

namespace majdyn {

/// Sum of opinions over all vertices: 2 * positives - n.
std::int64_t bias(const OpinionVector& s);

/// Number of +1 coordinates.
std::uint64_t positives(const OpinionVector& s);

/// Number of coordinates where a and b differ. Sizes must match.
std::uint64_t hamming(const OpinionVector& a, const OpinionVector& b);

/// Signed sum of the opinions of v's neighbors.
std::int64_t neighbor_sum(const Graph& g, const OpinionVector& s, Vertex v);

/// Neighbor sums for every vertex at once.
std::vector<std::int32_t> neighbor_sums(const Graph& g, const OpinionVector& s);

/// One synchronous day: every vertex takes the sign of its neighbor sum and
/// keeps its opinion when the sum is zero (isolated vertices included).
OpinionVector majority_step(const Graph& g, const OpinionVector& s);

/// Same update written into `out`, which is resized as needed. `out` must not
/// alias `s`.
void majority_step_into(const Graph& g, const OpinionVector& s, OpinionVector& out);

enum class Outcome { Unanimous, PeriodTwo, DayCapReached };

std::string_view to_string(Outcome outcome) noexcept;

struct DayRecord {
    std::int64_t bias = 0;
    std::uint64_t flips = 0;
    std::uint64_t positives = 0;
};

/// Per-day history of one run. days[0] is the initial state.
struct Trajectory {
    std::vector<DayRecord> days;
    Outcome outcome = Outcome::DayCapReached;
    /// Unanimous: first unanimous day. PeriodTwo: day the repeat was detected.
    std::uint32_t outcome_day = 0;
    /// Unanimous: +1 or -1. Otherwise 0.
    int sign = 0;
    /// PeriodTwo only: 1 for a non-unanimous fixed point, 2 for a true 2-cycle.
    std::uint32_t period = 0;
    std::uint32_t day_cap = 0;

    /// Bias on `day`, extended past the last recorded day by the detected
    /// periodic behavior. Throws std::out_of_range for days beyond the record
    /// of a DayCapReached run.
    std::int64_t bias_at(std::size_t day) const;
};

inline constexpr std::uint32_t kDefaultDayCap = 64;

/// Iterates majority_step from s0 until the state is unanimous, repeats with
/// period one or two, or `day_cap` days have been simulated.
Trajectory run(const Graph& g, const OpinionVector& s0, std::uint32_t day_cap = kDefaultDayCap);

}  // namespace majdyn
