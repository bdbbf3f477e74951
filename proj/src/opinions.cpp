#include "majdyn/opinions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "majdyn/dynamics.hpp"
#include "majdyn/rng.hpp"

namespace majdyn {
namespace {

// Uniform k-subset of [0, n) marked positive.
OpinionVector exactly_k_positive(std::size_t n, std::size_t k, std::uint64_t seed) {
    Rng rng(seed);
    OpinionVector s(n);
    const bool pick_positives = k <= n - k;
    const std::size_t picks = pick_positives ? k : n - k;
    if (!pick_positives) {
        s = OpinionVector(n, true);
    }
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    for (std::size_t i = 0; i < picks; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(perm[i], perm[j]);
        s.set(perm[i], pick_positives);
    }
    return s;
}

}  // namespace

OpinionVector sample_uniform(std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_uniform: n must be at least 1");
    }
    Rng rng(seed);
    OpinionVector s(n);
    for (auto& w : s.words()) {
        w = rng();
    }
    s.clear_padding();
    return s;
}

OpinionVector sample_morning(std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_morning: n must be at least 1");
    }
    return exactly_k_positive(n, (n + 1) / 2, seed);
}

OpinionVector sample_fixed_discrepancy(std::size_t n, std::int64_t d, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_fixed_discrepancy: n must be at least 1");
    }
    const auto sn = static_cast<std::int64_t>(n);
    if (d < -sn || d > sn) {
        throw std::invalid_argument("sample_fixed_discrepancy: |d| exceeds n");
    }
    if (((sn + d) & 1) != 0) {
        throw std::invalid_argument("sample_fixed_discrepancy: d = " + std::to_string(d) +
                                    " has different parity from n = " + std::to_string(n));
    }
    return exactly_k_positive(n, static_cast<std::size_t>((sn + d) / 2), seed);
}

std::size_t swing_count(std::size_t n, double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("swing_count: c must be a finite non-negative number");
    }
    return static_cast<std::size_t>(std::llround(c * std::sqrt(static_cast<double>(n))));
}

SwingResult apply_swing(const OpinionVector& r0, double c, std::uint64_t seed) {
    const std::size_t k = swing_count(r0.size(), c);
    std::vector<Vertex> negatives;
    negatives.reserve(r0.size() / 2 + 1);
    for (std::size_t v = 0; v < r0.size(); ++v) {
        if (!r0.positive(v)) {
            negatives.push_back(static_cast<Vertex>(v));
        }
    }
    if (k > negatives.size()) {
        throw std::invalid_argument("apply_swing: " + std::to_string(k) + " swing vertices requested but only " +
                                    std::to_string(negatives.size()) + " negative coordinates");
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(negatives.size() - i));
        std::swap(negatives[i], negatives[j]);
    }
    SwingResult result{r0, {negatives.begin(), negatives.begin() + static_cast<std::ptrdiff_t>(k)}};
    std::sort(result.swing_set.begin(), result.swing_set.end());
    for (Vertex v : result.swing_set) {
        result.evening.set(v, true);
    }
    return result;
}

CensusReport census(const Graph& g, const OpinionVector& r0, std::span<const Vertex> swing_set, double gamma,
                    double p) {
    if (r0.size() != g.n()) {
        throw std::invalid_argument("census: opinion vector size does not match graph");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("census: p must lie in (0, 1]");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("census: gamma must be a finite non-negative number");
    }
    const std::size_t n = g.n();
    std::vector<char> is_swing(n, 0);
    for (Vertex v : swing_set) {
        if (v >= n) {
            throw std::invalid_argument("census: swing vertex out of range");
        }
        is_swing[v] = 1;
    }

    CensusReport report;
    report.gamma = gamma;

    const OpinionVector r1 = majority_step(g, r0);
    const double threshold = -gamma * std::pow(p, 1.5) * static_cast<double>(n);
    const auto day1_sums = neighbor_sums(g, r1);
    for (std::int32_t sum : day1_sums) {
        report.almost_positive += static_cast<double>(sum) > threshold ? 1 : 0;
    }

    const auto day0_sums = neighbor_sums(g, r0);
    for (std::size_t w = 0; w < n; ++w) {
        if (day0_sums[w] != 0) {
            continue;
        }
        ++report.unstable;
        for (Vertex u : g.neighbors(static_cast<Vertex>(w))) {
            if (is_swing[u]) {
                ++report.unstable_with_swing;
                break;
            }
        }
    }
    report.excess = static_cast<std::int64_t>(report.almost_positive) - static_cast<std::int64_t>((n + 1) / 2);
    return report;
}

std::int64_t day2_bias_experiment(const Graph& g, double c, std::uint64_t seed) {
    const OpinionVector r0 = sample_morning(g.n(), derive_seed(seed, 1));
    const SwingResult swung = apply_swing(r0, c, derive_seed(seed, 2));
    const OpinionVector day1 = majority_step(g, swung.evening);
    return bias(majority_step(g, day1));
}

}  // namespace majdyn
