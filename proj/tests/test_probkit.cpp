#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "majdyn/probkit.hpp"
#include "majdyn/rng.hpp"

using namespace majdyn;
using namespace majdyn::probkit;

namespace {

// Masses from lgamma, no recurrence.
double lgamma_pmf(std::uint64_t n, double p, std::uint64_t k) {
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p));
}

// Bin(n, p) by adding one Bernoulli at a time.
std::vector<double> bernoulli_dp(std::uint64_t n, double p) {
    std::vector<double> dist{1.0};
    for (std::uint64_t i = 0; i < n; ++i) {
        std::vector<double> next(dist.size() + 1, 0.0);
        for (std::size_t k = 0; k < dist.size(); ++k) {
            next[k] += dist[k] * (1 - p);
            next[k + 1] += dist[k] * p;
        }
        dist = std::move(next);
    }
    return dist;
}

// P[X - Y = t] by a double loop over the two supports.
std::vector<double> brute_diff(std::uint64_t n, double p, std::uint64_t m, double q) {
    auto a = bernoulli_dp(n, p);
    auto b = bernoulli_dp(m, q);
    std::vector<double> out(n + m + 1, 0.0);  // index t + m
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + m - j] += a[i] * b[j];
        }
    }
    return out;
}

double brute_tail_ge(const std::vector<double>& diff, std::int64_t offset, std::int64_t l) {
    double s = 0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        if (static_cast<std::int64_t>(i) + offset >= l) s += diff[i];
    }
    return s;
}

// Composite Simpson on the normal density over [x, x + 40].
double psi_quadrature(double x) {
    const int steps = 200000;
    const double h = 40.0 / steps;
    auto f = [](double t) { return std::exp(-t * t / 2) / std::sqrt(2 * std::numbers::pi); };
    double s = f(x) + f(x + 40.0);
    for (int i = 1; i < steps; ++i) s += f(x + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

}  // namespace

TEST(Chernoff, Examples) {
    EXPECT_DOUBLE_EQ(chernoff_upper(100, 0), 1.0);
    EXPECT_NEAR(chernoff_upper(100, 30), std::exp(-900.0 / 220.0), 1e-15);
    EXPECT_NEAR(chernoff_upper(100, 30), 0.016724, 1e-6);
    EXPECT_DOUBLE_EQ(chernoff_lower(50, 0), 1.0);
    EXPECT_NEAR(chernoff_lower(50, 20), std::exp(-4.0), 1e-15);
    EXPECT_DOUBLE_EQ(chernoff_upper(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(chernoff_lower(0, 1), 0.0);
    EXPECT_THROW(chernoff_upper(-1, 1), std::invalid_argument);
    EXPECT_THROW(chernoff_lower(1, -1), std::invalid_argument);
}

TEST(Chernoff, BoundsExactTails) {
    for (std::uint64_t n : {10, 100, 1000}) {
        for (double p : {0.01, 0.1, 0.5}) {
            auto pmf = binom_pmf({n, p});
            const double mu = n * p;
            for (int i = 0; i <= 20; ++i) {
                const double t = mu * i / 10.0;
                EXPECT_LE(pmf.upper_tail(static_cast<std::int64_t>(std::ceil(mu + t))), chernoff_upper(mu, t) + 1e-12);
                EXPECT_LE(pmf.lower_tail(static_cast<std::int64_t>(std::floor(mu - t))), chernoff_lower(mu, t) + 1e-12);
            }
        }
    }
}

TEST(Normal, Examples) {
    EXPECT_DOUBLE_EQ(psi(0.0), 0.5);
    EXPECT_NEAR(psi(1.0), 0.158655253931457, 1e-14);
    EXPECT_NEAR(psi(1.0), psi_quadrature(1.0), 1e-12);
    for (double x : {-6.0, -2.5, -0.3, 0.7, 2.0, 4.5}) {
        EXPECT_NEAR(phi(x) + psi(x), 1.0, 1e-15);
        EXPECT_NEAR(psi(x), psi_quadrature(x), 1e-11) << x;
    }
    // Far tail keeps relative precision.
    EXPECT_NEAR(psi(10.0) / 7.619853024160527e-24, 1.0, 1e-12);
}

TEST(Normal, Contraction) {
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
        const double x = (rng.uniform() - 0.5) * 20;
        const double y = (rng.uniform() - 0.5) * 20;
        EXPECT_LE(std::abs(psi(x) - psi(y)), std::abs(x - y) + 1e-15);
    }
}

TEST(BinomPmf, MatchesOracles) {
    for (std::uint64_t n : {0, 1, 2, 7, 40, 150}) {
        for (double p : {0.0, 0.03, 0.5, 0.91, 1.0}) {
            auto pmf = binom_pmf({n, p});
            auto dp = bernoulli_dp(n, p);
            EXPECT_NEAR(pmf.total(), 1.0, 1e-13);
            for (std::uint64_t k = 0; k <= n; ++k) {
                const auto kk = static_cast<std::int64_t>(k);
                EXPECT_NEAR(pmf.at(kk), dp[k], 1e-13) << n << " " << p << " " << k;
                if (dp[k] > 1e-250) EXPECT_NEAR(pmf.at(kk) / lgamma_pmf(n, p, k), 1.0, 1e-9);
            }
        }
    }
}

TEST(BinomPmf, LargeAndOutOfRange) {
    auto pmf = binom_pmf({20000, 0.3});
    EXPECT_NEAR(pmf.total(), 1.0, 1e-12);
    EXPECT_NEAR(pmf.at(6000) / lgamma_pmf(20000, 0.3, 6000), 1.0, 1e-9);
    EXPECT_DOUBLE_EQ(pmf.at(-1), 0.0);
    EXPECT_DOUBLE_EQ(pmf.at(20001), 0.0);
    EXPECT_THROW(binom_diff_pmf({15000, 0.3}, {5001, 0.3}), std::invalid_argument);
    EXPECT_THROW(binom_pmf({10, 1.2}), std::invalid_argument);
}

TEST(BinomPmf, Tails) {
    auto pmf = binom_pmf({4, 0.5});
    EXPECT_NEAR(pmf.upper_tail(3), 5.0 / 16, 1e-15);
    EXPECT_NEAR(pmf.lower_tail(1), 5.0 / 16, 1e-15);
    EXPECT_DOUBLE_EQ(pmf.upper_tail(-3), 1.0);
    EXPECT_DOUBLE_EQ(pmf.upper_tail(9), 0.0);
    EXPECT_NEAR(pmf.max_mass(), 6.0 / 16, 1e-15);
}

TEST(Convolution, DiffMatchesBrute) {
    Rng rng(9);
    for (int rep = 0; rep < 40; ++rep) {
        const std::uint64_t n = rng.below(60);
        const std::uint64_t m = rng.below(60);
        const double p = rng.uniform();
        const double q = rng.uniform();
        auto got = binom_diff_pmf({n, p}, {m, q});
        auto want = brute_diff(n, p, m, q);
        for (std::size_t i = 0; i < want.size(); ++i) {
            EXPECT_NEAR(got.at(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(m)), want[i], 1e-13);
        }
    }
}

TEST(Convolution, Examples) {
    auto zero = binom_diff_pmf({0, 0.4}, {0, 0.4});
    EXPECT_EQ(zero.lo(), 0);
    EXPECT_EQ(zero.hi(), 0);
    EXPECT_DOUBLE_EQ(zero.at(0), 1.0);
    // Sum of binomials with the same p is binomial.
    auto sum = convolve_sum(binom_pmf({30, 0.2}), binom_pmf({50, 0.2}));
    auto direct = binom_pmf({80, 0.2});
    for (std::int64_t k = 0; k <= 80; ++k) EXPECT_NEAR(sum.at(k), direct.at(k), 1e-14);
}

TEST(BinomShift, AgainstBrute) {
    auto c = check_binom_shift({100, 0.1}, {90, 0.1}, 1.0);
    auto diff = brute_diff(100, 0.1, 90, 0.1);
    double worst = 0;
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) worst = std::max(worst, std::abs(diff[i + 1] - diff[i]));
    EXPECT_NEAR(c.max_diff, worst, 1e-14);
    EXPECT_NEAR(c.ratio, worst * 190 * 0.1 * 0.9, 1e-12);
    EXPECT_NEAR(c.bound, 1.0 / (190 * 0.1 * 0.9), 1e-15);
}

TEST(BinomShift, RatioBoundedAcrossSizes) {
    for (std::uint64_t n = 50; n <= 500; n += 50) {
        auto c = check_binom_shift({n, 0.1}, {n * 9 / 10, 0.1});
        EXPECT_LE(c.ratio, 0.5) << n;
    }
    EXPECT_THROW(check_binom_shift({10, 0.1}, {10, 0.2}), std::invalid_argument);
}

TEST(EqualityProb, Examples) {
    auto e = check_equality_prob({4, 0.5}, {4, 0.5});
    EXPECT_NEAR(e.p_equal, 70.0 / 256, 1e-15);
    EXPECT_NEAR(e.p_greater_equal, 163.0 / 256, 1e-15);
    EXPECT_NEAR(e.theta_ratio, 70.0 / 256 * std::sqrt(2.0), 1e-14);
}

TEST(EqualityProb, SymmetricCaseAtLeastHalf) {
    for (std::uint64_t n : {1, 5, 33, 400}) {
        for (double p : {0.02, 0.4, 0.77}) {
            EXPECT_GE(check_equality_prob({n, p}, {n, p}).p_greater_equal, 0.5);
        }
    }
}

TEST(EqualityProb, ThetaBand) {
    for (std::uint64_t n = 100; n <= 2000; n += 100) {
        auto e = check_equality_prob({n, 0.05}, {n, 0.05});
        EXPECT_GE(e.theta_ratio, 0.2) << n;
        EXPECT_LE(e.theta_ratio, 0.8) << n;
        auto diff = brute_diff(n, 0.05, n, 0.05);
        if (n <= 300) EXPECT_NEAR(e.p_equal, diff[n], 1e-13);
    }
}

TEST(Coupling, Examples) {
    auto none = check_coupling({10, 0.3}, {0, 0.3}, {10, 0.3}, {0, 0.3}, 0);
    EXPECT_DOUBLE_EQ(none.middle, 0.0);
    EXPECT_DOUBLE_EQ(none.lhs, 0.0);
    EXPECT_DOUBLE_EQ(none.rhs, 0.0);

    auto s = check_coupling({10, 0.3}, {3, 0.3}, {10, 0.3}, {3, 0.3}, 0);
    auto full = brute_diff(13, 0.3, 13, 0.3);
    auto base = brute_diff(10, 0.3, 10, 0.3);
    const double middle = brute_tail_ge(full, -13, 0) - brute_tail_ge(base, -10, 0);
    EXPECT_NEAR(s.middle, middle, 1e-14);
    EXPECT_TRUE(s.holds(1e-12));
    EXPECT_NEAR(s.lhs, -0.9 * *std::max_element(base.begin(), base.end()), 1e-14);
    auto zw = brute_diff(10, 0.3, 13, 0.3);
    EXPECT_NEAR(s.rhs, 0.9 * *std::max_element(zw.begin(), zw.end()), 1e-14);
}

TEST(Coupling, RandomSandwich) {
    Rng rng(15);
    for (int rep = 0; rep < 500; ++rep) {
        auto spec = [&](std::uint64_t max) { return BinomSpec{rng.below(max + 1), rng.uniform()}; };
        const auto l = static_cast<std::int64_t>(rng.below(41)) - 20;
        auto s = check_coupling(spec(60), spec(15), spec(60), spec(15), l);
        EXPECT_TRUE(s.holds(1e-12)) << rep;
    }
}

TEST(FourRv, Examples) {
    EXPECT_DOUBLE_EQ(check_four_rv(100, 80, 100, 80, 0.1, 3).difference, 0.0);
    auto c = check_four_rv(110, 100, 100, 100, 0.1, 0);
    auto a = brute_diff(110, 0.1, 100, 0.1);
    auto b = brute_diff(100, 0.1, 100, 0.1);
    const double diff = std::abs(brute_tail_ge(a, -100, 0) - brute_tail_ge(b, -100, 0));
    EXPECT_NEAR(c.difference, diff, 1e-13);
    EXPECT_NEAR(c.scale, 0.1 * 10 / std::sqrt(0.1 * 100), 1e-14);
    EXPECT_LE(c.difference, 3 * c.scale);
}

TEST(BerryEsseen, TwoPoint) {
    EXPECT_NEAR(berry_esseen_gap(1, 0.5), std::abs(0.5 - phi(-1.0)), 1e-14);
    EXPECT_NEAR(berry_esseen_gap(1, 0.5), 0.3413, 1e-4);
    EXPECT_THROW(berry_esseen_gap(0, 0.5), std::invalid_argument);
    EXPECT_THROW(berry_esseen_gap(10, 0.0), std::invalid_argument);
}

TEST(BerryEsseen, AgainstDirectScan) {
    for (std::uint64_t n : {3, 20, 75}) {
        for (double p : {0.1, 0.5, 0.8}) {
            auto dp = bernoulli_dp(n, p);
            const double sigma = std::sqrt(n * p * (1 - p));
            double cdf = 0, gap = 0;
            for (std::uint64_t k = 0; k <= n; ++k) {
                const double x = (k - n * p) / sigma;
                gap = std::max(gap, std::abs(cdf - phi(x)));
                cdf += dp[k];
                gap = std::max(gap, std::abs(cdf - phi(x)));
            }
            EXPECT_NEAR(berry_esseen_gap(n, p), gap, 1e-12) << n << " " << p;
        }
    }
}

TEST(BerryEsseen, ScalingAndEnvelope) {
    for (double p : {0.05, 0.3, 0.5}) {
        for (std::uint64_t n = 100; n <= 20000; n *= 4) {
            const double sigma = std::sqrt(n * p * (1 - p));
            const double g = berry_esseen_gap(n, p);
            EXPECT_LE(g * sigma, 1.0);
            EXPECT_LE(berry_esseen_gap(4 * n, p), 0.7 * g) << n << " " << p;
        }
    }
}

TEST(CompensatedSum, CancelsRoundoff) {
    std::vector<double> v{1.0, 1e100, 1.0, -1e100};
    EXPECT_DOUBLE_EQ(compensated_sum(v), 2.0);
}
