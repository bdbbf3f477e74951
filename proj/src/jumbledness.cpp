#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "majdyn/graph.hpp"
#include "majdyn/rng.hpp"

namespace majdyn {
namespace {

// Counts ordered adjacent pairs from the distinct members of `u_set` into the
// vertices flagged in `in_v`.
std::uint64_t count_into(const Graph& g, std::span<const Vertex> u_set, const std::vector<char>& in_v) {
    std::uint64_t total = 0;
    for (Vertex u : u_set) {
        for (Vertex w : g.neighbors(u)) {
            total += static_cast<std::uint64_t>(in_v[w]);
        }
    }
    return total;
}

void check_ids(const Graph& g, std::span<const Vertex> set) {
    for (Vertex v : set) {
        if (v >= g.n()) {
            throw std::out_of_range("edges_between: vertex " + std::to_string(v) + " out of range");
        }
    }
}

}  // namespace

std::uint64_t edges_between(const Graph& g, std::span<const Vertex> u_set, std::span<const Vertex> v_set) {
    check_ids(g, u_set);
    check_ids(g, v_set);
    std::vector<char> in_v(g.n(), 0);
    for (Vertex v : v_set) {
        in_v[v] = 1;
    }
    std::vector<char> seen(g.n(), 0);
    std::vector<Vertex> unique_u;
    unique_u.reserve(u_set.size());
    for (Vertex u : u_set) {
        if (!seen[u]) {
            seen[u] = 1;
            unique_u.push_back(u);
        }
    }
    return count_into(g, unique_u, in_v);
}

JumblednessEstimate estimate_jumbledness(const Graph& g, double p, std::uint64_t pairs, SubsetSizeRange sizes,
                                         std::uint64_t seed) {
    if (pairs == 0) {
        throw std::invalid_argument("estimate_jumbledness: pairs must be at least 1");
    }
    if (sizes.min == 0 || sizes.min > sizes.max) {
        throw std::invalid_argument("estimate_jumbledness: empty subset size range");
    }
    const std::size_t n = g.n();
    if (n == 0 || sizes.min > n) {
        throw std::invalid_argument("estimate_jumbledness: subset sizes exceed vertex count");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("estimate_jumbledness: p must lie in [0, 1]");
    }

    JumblednessEstimate est;
    est.pairs_tested = pairs;
    est.min_degree = degree_stats(g).min;

    Rng rng(seed);
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    std::vector<char> in_v(n, 0);

    auto draw_size = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
    };

    for (std::uint64_t t = 0; t < pairs; ++t) {
        // U and V are disjoint blocks of a partial Fisher-Yates shuffle. A
        // one-vertex graph has no disjoint pair and uses U = V = {0}.
        std::size_t a = 1;
        std::size_t b = 1;
        if (n >= 2) {
            a = draw_size(std::min(sizes.min, n - 1), std::min(sizes.max, n - 1));
            b = draw_size(std::min(sizes.min, n - a), std::min(sizes.max, n - a));
            for (std::size_t i = 0; i < a + b; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
                std::swap(perm[i], perm[j]);
            }
        }
        std::span<const Vertex> u_set(perm.data(), a);
        std::span<const Vertex> v_set(n >= 2 ? perm.data() + a : perm.data(), b);

        for (Vertex v : v_set) {
            in_v[v] = 1;
        }
        const auto e = static_cast<double>(count_into(g, u_set, in_v));
        for (Vertex v : v_set) {
            in_v[v] = 0;
        }
        const double uv = static_cast<double>(a) * static_cast<double>(b);
        const double discrepancy = std::abs(e - p * uv) / std::sqrt(uv);
        est.max_discrepancy = std::max(est.max_discrepancy, discrepancy);
    }
    est.beta_hat = est.max_discrepancy;
    return est;
}

}  // namespace majdyn
