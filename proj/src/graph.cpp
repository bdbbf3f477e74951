#include "majdyn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "majdyn/rng.hpp"

namespace majdyn {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    if (n > std::numeric_limits<Vertex>::max()) {
        throw std::invalid_argument("graph: vertex count exceeds 32-bit range");
    }
    std::vector<std::uint64_t> offsets(n + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw std::invalid_argument("graph: edge endpoint out of range");
        }
        if (u == v) {
            throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u));
        }
        ++offsets[u + 1];
        ++offsets[v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) {
        offsets[v + 1] += offsets[v];
    }
    std::vector<Vertex> neighbors(offsets[n]);
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges) {
        neighbors[cursor[u]++] = v;
        neighbors[cursor[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto first = neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
        auto last = neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
        std::sort(first, last);
        if (std::adjacent_find(first, last) != last) {
            throw std::invalid_argument("graph: repeated edge at vertex " + std::to_string(v));
        }
    }
    Graph g;
    g.n_ = n;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    return g;
}

Graph Graph::from_csr(std::size_t n, std::vector<std::uint64_t> offsets, std::vector<Vertex> neighbors,
                      std::optional<double> sampling_p) {
    Graph g;
    g.n_ = n;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    g.sampling_p_ = sampling_p;
    if (auto why = g.invariant_violation(); !why.empty()) {
        throw std::invalid_argument("graph: " + why);
    }
    return g;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
    auto list = neighbors(u);
    return std::binary_search(list.begin(), list.end(), v);
}

std::string Graph::invariant_violation() const {
    if (offsets_.size() != n_ + 1 || offsets_.front() != 0) {
        return "offsets must have n + 1 entries starting at 0";
    }
    if (offsets_.back() != neighbors_.size()) {
        return "last offset must equal the neighbor array length";
    }
    if (neighbors_.size() % 2 != 0) {
        return "neighbor array length must be even";
    }
    for (std::size_t v = 0; v < n_; ++v) {
        if (offsets_[v] > offsets_[v + 1]) {
            return "offsets must be non-decreasing";
        }
    }
    for (std::size_t v = 0; v < n_; ++v) {
        auto list = neighbors(static_cast<Vertex>(v));
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Vertex u = list[i];
            if (u >= n_) {
                return "neighbor out of range at vertex " + std::to_string(v);
            }
            if (u == v) {
                return "self-loop at vertex " + std::to_string(v);
            }
            if (i > 0 && list[i - 1] >= u) {
                return "neighbor list not strictly increasing at vertex " + std::to_string(v);
            }
            if (!adjacent(u, static_cast<Vertex>(v))) {
                return "asymmetric adjacency between " + std::to_string(v) + " and " + std::to_string(u);
            }
        }
    }
    return {};
}

Graph sample_gnp(std::size_t n, double p, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_gnp: n must be at least 1");
    }
    if (n > std::numeric_limits<Vertex>::max()) {
        throw std::invalid_argument("sample_gnp: n exceeds 32-bit vertex range");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("sample_gnp: p must lie in [0, 1]");
    }

    // Edges (v, w) with w < v in row-major order. Rows are visited in
    // increasing v, so appending to each endpoint's list in generation order
    // yields sorted lists without a sort pass.
    std::vector<Edge> edges;
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    if (p == 1.0) {
        edges.reserve(static_cast<std::size_t>(pairs));
        for (std::size_t v = 1; v < n; ++v) {
            for (std::size_t w = 0; w < v; ++w) {
                edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(w));
            }
        }
    } else if (p > 0.0) {
        const double mean = pairs * p;
        edges.reserve(static_cast<std::size_t>(mean + 6.0 * std::sqrt(mean) + 16.0));
        Rng rng(seed);
        const double log_q = std::log1p(-p);
        std::int64_t v = 1;
        std::int64_t w = -1;
        const auto rows = static_cast<std::int64_t>(n);
        while (v < rows) {
            const double skip = std::floor(std::log1p(-rng.uniform()) / log_q);
            if (!(skip < pairs)) {
                break;
            }
            w += 1 + static_cast<std::int64_t>(skip);
            while (w >= v && v < rows) {
                w -= v;
                ++v;
            }
            if (v < rows) {
                edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(w));
            }
        }
    }

    std::vector<std::uint64_t> offsets(n + 1, 0);
    for (const auto& [v, w] : edges) {
        ++offsets[v + 1];
        ++offsets[w + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        offsets[i + 1] += offsets[i];
    }
    std::vector<Vertex> neighbors(offsets[n]);
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [v, w] : edges) {
        neighbors[cursor[v]++] = w;
        neighbors[cursor[w]++] = v;
    }
    edges = {};

    // Sorted, symmetric and loop-free by construction; the property tests
    // check the invariants instead of paying for validation here.
    Graph g;
    g.n_ = n;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    g.sampling_p_ = p;
    return g;
}

DegreeStats degree_stats(const Graph& g) {
    DegreeStats stats;
    if (g.n() == 0) {
        return stats;
    }
    stats.min = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t v = 0; v < g.n(); ++v) {
        const std::uint64_t d = g.degree(static_cast<Vertex>(v));
        stats.min = std::min(stats.min, d);
        stats.max = std::max(stats.max, d);
    }
    stats.mean = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.n());
    return stats;
}

}  // namespace majdyn
