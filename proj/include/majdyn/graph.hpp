#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "majdyn/simd/kernels.hpp"

namespace majdyn {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Neighbor lists are strictly increasing, adjacency is symmetric and there
/// are no self-loops. A Graph is safe to share between threads.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an undirected edge list. Throws std::invalid_argument
    /// on self-loops, repeated edges or out-of-range endpoints.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    /// Adopts prebuilt arrays after validating every invariant.
    static Graph from_csr(std::size_t n, std::vector<std::uint64_t> offsets, std::vector<Vertex> neighbors,
                          std::optional<double> sampling_p = std::nullopt);

    std::size_t n() const noexcept { return n_; }
    std::uint64_t edge_count() const noexcept { return neighbors_.size() / 2; }

    /// The p this graph was sampled with, if it came from sample_gnp.
    std::optional<double> sampling_p() const noexcept { return sampling_p_; }

    std::span<const Vertex> neighbors(Vertex v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::uint64_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    bool adjacent(Vertex u, Vertex v) const;

    std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
    std::span<const Vertex> neighbor_array() const noexcept { return neighbors_; }

    simd::CsrView csr() const noexcept { return {n_, offsets_.data(), neighbors_.data()}; }

    /// Empty string when all invariants hold, otherwise the first violation.
    std::string invariant_violation() const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
    }

private:
    friend Graph sample_gnp(std::size_t n, double p, std::uint64_t seed);

    std::size_t n_ = 0;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<Vertex> neighbors_;
    std::optional<double> sampling_p_;
};

/// Samples G(n, p): each of the n(n-1)/2 edges independently with probability
/// p. Present edges are enumerated with geometric skips, so the expected cost
/// is O(n + m). Identical (n, p, seed) gives an identical graph.
Graph sample_gnp(std::size_t n, double p, std::uint64_t seed);

struct DegreeStats {
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    double mean = 0.0;
};

DegreeStats degree_stats(const Graph& g);

/// e(U,V): ordered pairs (u, v) with u in U, v in V and u ~ v. An edge with
/// both endpoints in U ∩ V is counted twice. U and V are treated as sets.
std::uint64_t edges_between(const Graph& g, std::span<const Vertex> u_set, std::span<const Vertex> v_set);

struct JumblednessEstimate {
    double beta_hat = 0.0;
    std::uint64_t pairs_tested = 0;
    double max_discrepancy = 0.0;
    std::uint64_t min_degree = 0;
};

struct SubsetSizeRange {
    std::size_t min = 1;
    std::size_t max = 1;
};

/// Lower-bound witness for the jumbledness parameter of `g` relative to
/// density p: the largest |e(U,V) - p|U||V|| / sqrt(|U||V|) over `pairs`
/// random disjoint subset pairs with sizes drawn from `sizes`.
JumblednessEstimate estimate_jumbledness(const Graph& g, double p, std::uint64_t pairs, SubsetSizeRange sizes,
                                         std::uint64_t seed);

/// Binary dump: "MAJDYNG\0", u32 version, u64 n, u64 edge_count, then n + 1
/// u64 offsets and 2 * edge_count u32 neighbors, all little-endian.
void save_graph(const Graph& g, const std::filesystem::path& path);
Graph load_graph(const std::filesystem::path& path);

inline constexpr std::uint32_t kGraphFormatVersion = 1;

}  // namespace majdyn
