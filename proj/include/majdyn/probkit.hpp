#pragma once

// Exact binomial toolkit: tail bounds, normal CDF, and exact convolutions used
// to check binomial approximation inequalities at desk scale.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace majdyn::probkit {

struct BinomSpec {
    std::uint64_t trials = 0;
    double prob = 0.0;
};

/// Distribution on the integers support_offset .. support_offset + masses.size() - 1.
struct PMF {
    std::int64_t support_offset = 0;
    std::vector<double> masses;

    std::int64_t lo() const noexcept { return support_offset; }
    std::int64_t hi() const noexcept { return support_offset + static_cast<std::int64_t>(masses.size()) - 1; }

    /// P[X = k]; zero outside the support.
    double at(std::int64_t k) const noexcept;
    /// P[X >= k].
    double upper_tail(std::int64_t k) const;
    /// P[X <= k].
    double lower_tail(std::int64_t k) const;
    double max_mass() const noexcept;
    double total() const;
};

/// Upper bound on convolution sizes: the summed trial counts of every
/// binomial entering one exact computation.
inline constexpr std::uint64_t kMaxExactTrials = 20000;

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

/// P[X >= mu + t] <= exp(-t^2 / (2 mu + 2t/3)); 1 when mu = t = 0.
double chernoff_upper(double mu, double t);

/// P[X <= mu - t] <= exp(-t^2 / (2 mu)); for mu = 0 the bound is 1 at t = 0
/// and 0 otherwise.
double chernoff_lower(double mu, double t);

/// Standard normal CDF and survival function, evaluated through erfc so both
/// tails keep full relative precision.
double phi(double x);
double psi(double x);

/// Exact Bin(n, p) masses by the ratio recurrence outward from the mode,
/// normalized with a compensated sum. Support is trimmed where masses
/// underflow to zero.
PMF binom_pmf(BinomSpec spec);

/// Distribution of X + Y and X - Y for independent X ~ a, Y ~ b.
PMF convolve_sum(const PMF& a, const PMF& b);
PMF convolve_diff(const PMF& a, const PMF& b);

/// Exact distribution of X - Y, X ~ Bin(a), Y ~ Bin(b) independent.
PMF binom_diff_pmf(BinomSpec a, BinomSpec b);

struct ShiftCheck {
    /// max_t |P[X-Y = t+1] - P[X-Y = t]|
    double max_diff = 0.0;
    /// constant / ((m + n) p (1 - p))
    double bound = 0.0;
    /// max_diff * (m + n) p (1 - p): the smallest constant that works here.
    double ratio = 0.0;
};

/// Successive-mass smoothness of X - Y. Both specs must share p in (0, 1).
ShiftCheck check_binom_shift(BinomSpec a, BinomSpec b, double constant = 1.0);

struct EqualityCheck {
    double p_equal = 0.0;
    double p_greater_equal = 0.0;
    /// P[X = Y] * sqrt(n p) with n = a.trials.
    double theta_ratio = 0.0;
    /// |P[X >= Y] - 1/2| * sqrt(n p) / (1 + |n - m| p).
    double ge_ratio = 0.0;
    /// |n - m| <= sqrt(n log n).
    bool in_regime = false;
};

/// Exact P[X = Y] and P[X >= Y]. Both specs must share p in (0, 1).
EqualityCheck check_equality_prob(BinomSpec a, BinomSpec b);

struct Sandwich {
    double lhs = 0.0;
    double middle = 0.0;
    double rhs = 0.0;

    bool holds(double tolerance) const noexcept { return lhs <= middle + tolerance && middle <= rhs + tolerance; }
};

/// With Z = Z1 + Z2 and W = W1 + W2 independent:
///   lhs    = -E[W2] max_k P[Z1 - W1 = k]
///   middle = P[Z - W >= l] - P[Z1 - W1 >= l]
///   rhs    =  E[Z2] max_k P[Z1 - W = k]
Sandwich check_coupling(BinomSpec z1, BinomSpec z2, BinomSpec w1, BinomSpec w2, std::int64_t l);

struct FourRvCheck {
    /// |P[X' - Y' >= l] - P[X - Y >= l]|
    double difference = 0.0;
    /// p * Delta / sqrt(p * n0)
    double scale = 0.0;
    /// difference / scale, 0 when both vanish.
    double ratio = 0.0;
};

/// X' ~ Bin(n1, p), Y' ~ Bin(n2, p), X ~ Bin(n3, p), Y ~ Bin(n4, p).
FourRvCheck check_four_rv(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3, std::uint64_t n4, double p,
                          std::int64_t l);

/// Upper limit on n for berry_esseen_gap.
inline constexpr std::uint64_t kMaxBerryEsseenTrials = 1'000'000;

/// sup_x |P[(X - np)/sigma <= x] - Phi(x)| for X ~ Bin(n, p), taken over both
/// sides of every atom. p must lie in (0, 1).
double berry_esseen_gap(std::uint64_t n, double p);

}  // namespace majdyn::probkit
