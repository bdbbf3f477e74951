#include "majdyn/probkit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace majdyn::probkit {
namespace {

void require_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + ": probability must lie in [0, 1]");
    }
}

void require_open_prob(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument(std::string(what) + ": probability must lie strictly inside (0, 1)");
    }
}

void require_guard(std::uint64_t total, const char* what) {
    if (total > kMaxExactTrials) {
        throw std::invalid_argument(std::string(what) + ": " + std::to_string(total) +
                                    " total trials exceed the exact-convolution guard of " +
                                    std::to_string(kMaxExactTrials));
    }
}

void require_same_prob(BinomSpec a, BinomSpec b, const char* what) {
    require_open_prob(a.prob, what);
    if (a.prob != b.prob) {
        throw std::invalid_argument(std::string(what) + ": both binomials must share the same p");
    }
}

void trim(PMF& pmf) {
    auto first = std::find_if(pmf.masses.begin(), pmf.masses.end(), [](double m) { return m != 0.0; });
    if (first == pmf.masses.end()) {
        return;
    }
    auto last = std::find_if(pmf.masses.rbegin(), pmf.masses.rend(), [](double m) { return m != 0.0; }).base();
    pmf.support_offset += first - pmf.masses.begin();
    pmf.masses = std::vector<double>(first, last);
}

}  // namespace

double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

double PMF::at(std::int64_t k) const noexcept {
    if (k < lo() || k > hi()) {
        return 0.0;
    }
    return masses[static_cast<std::size_t>(k - support_offset)];
}

double PMF::upper_tail(std::int64_t k) const {
    if (k <= lo()) {
        return total();
    }
    if (k > hi()) {
        return 0.0;
    }
    return compensated_sum(std::span(masses).subspan(static_cast<std::size_t>(k - support_offset)));
}

double PMF::lower_tail(std::int64_t k) const {
    if (k < lo()) {
        return 0.0;
    }
    if (k >= hi()) {
        return total();
    }
    return compensated_sum(std::span(masses).first(static_cast<std::size_t>(k - support_offset + 1)));
}

double PMF::max_mass() const noexcept {
    return masses.empty() ? 0.0 : *std::max_element(masses.begin(), masses.end());
}

double PMF::total() const { return compensated_sum(masses); }

double chernoff_upper(double mu, double t) {
    if (!(mu >= 0.0) || !(t >= 0.0)) {
        throw std::invalid_argument("chernoff_upper: mu and t must be non-negative");
    }
    if (t == 0.0) {
        return 1.0;
    }
    return std::exp(-t * t / (2.0 * mu + 2.0 * t / 3.0));
}

double chernoff_lower(double mu, double t) {
    if (!(mu >= 0.0) || !(t >= 0.0)) {
        throw std::invalid_argument("chernoff_lower: mu and t must be non-negative");
    }
    if (t == 0.0) {
        return 1.0;
    }
    if (mu == 0.0) {
        return 0.0;
    }
    return std::exp(-t * t / (2.0 * mu));
}

double phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double psi(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

PMF binom_pmf(BinomSpec spec) {
    require_prob(spec.prob, "binom_pmf");
    const std::uint64_t n = spec.trials;
    const double p = spec.prob;
    PMF pmf;
    if (p == 0.0 || n == 0) {
        pmf.masses = {1.0};
        return pmf;
    }
    if (p == 1.0) {
        pmf.support_offset = static_cast<std::int64_t>(n);
        pmf.masses = {1.0};
        return pmf;
    }
    const auto mode = std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::floor((static_cast<double>(n) + 1.0) * p)));
    const double odds = p / (1.0 - p);
    std::vector<double> w(n + 1, 0.0);
    w[mode] = 1.0;
    for (std::uint64_t k = mode; k < n; ++k) {
        w[k + 1] = w[k] * (static_cast<double>(n - k) / static_cast<double>(k + 1)) * odds;
        if (w[k + 1] == 0.0) {
            break;
        }
    }
    for (std::uint64_t k = mode; k > 0; --k) {
        w[k - 1] = w[k] * (static_cast<double>(k) / static_cast<double>(n - k + 1)) / odds;
        if (w[k - 1] == 0.0) {
            break;
        }
    }
    const double norm = compensated_sum(w);
    for (double& m : w) {
        m /= norm;
    }
    pmf.masses = std::move(w);
    trim(pmf);
    return pmf;
}

PMF convolve_sum(const PMF& a, const PMF& b) {
    PMF out;
    if (a.masses.empty() || b.masses.empty()) {
        return out;
    }
    out.support_offset = a.support_offset + b.support_offset;
    out.masses.assign(a.masses.size() + b.masses.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.masses.size(); ++i) {
        const double ai = a.masses[i];
        if (ai == 0.0) {
            continue;
        }
        double* dst = out.masses.data() + i;
        for (std::size_t j = 0; j < b.masses.size(); ++j) {
            dst[j] += ai * b.masses[j];
        }
    }
    return out;
}

PMF convolve_diff(const PMF& a, const PMF& b) {
    PMF reflected;
    reflected.support_offset = -b.hi();
    reflected.masses.assign(b.masses.rbegin(), b.masses.rend());
    return convolve_sum(a, reflected);
}

PMF binom_diff_pmf(BinomSpec a, BinomSpec b) {
    require_prob(a.prob, "binom_diff_pmf");
    require_prob(b.prob, "binom_diff_pmf");
    require_guard(a.trials + b.trials, "binom_diff_pmf");
    return convolve_diff(binom_pmf(a), binom_pmf(b));
}

ShiftCheck check_binom_shift(BinomSpec a, BinomSpec b, double constant) {
    require_same_prob(a, b, "check_binom_shift");
    const PMF diff = binom_diff_pmf(a, b);
    ShiftCheck check;
    for (std::int64_t t = diff.lo() - 1; t <= diff.hi(); ++t) {
        check.max_diff = std::max(check.max_diff, std::abs(diff.at(t + 1) - diff.at(t)));
    }
    const double p = a.prob;
    const double scale = static_cast<double>(a.trials + b.trials) * p * (1.0 - p);
    check.bound = constant / scale;
    check.ratio = check.max_diff * scale;
    return check;
}

EqualityCheck check_equality_prob(BinomSpec a, BinomSpec b) {
    require_same_prob(a, b, "check_equality_prob");
    if (a.trials == 0) {
        throw std::invalid_argument("check_equality_prob: first binomial needs at least one trial");
    }
    const PMF diff = binom_diff_pmf(a, b);
    EqualityCheck check;
    check.p_equal = diff.at(0);
    check.p_greater_equal = diff.upper_tail(0);
    const double n = static_cast<double>(a.trials);
    const double gap = std::abs(n - static_cast<double>(b.trials));
    const double root_np = std::sqrt(n * a.prob);
    check.theta_ratio = check.p_equal * root_np;
    check.ge_ratio = std::abs(check.p_greater_equal - 0.5) * root_np / (1.0 + gap * a.prob);
    check.in_regime = gap <= std::sqrt(n * std::log(n));
    return check;
}

Sandwich check_coupling(BinomSpec z1, BinomSpec z2, BinomSpec w1, BinomSpec w2, std::int64_t l) {
    for (const auto& spec : {z1, z2, w1, w2}) {
        require_prob(spec.prob, "check_coupling");
    }
    require_guard(z1.trials + z2.trials + w1.trials + w2.trials, "check_coupling");
    const PMF pz1 = binom_pmf(z1);
    const PMF pw1 = binom_pmf(w1);
    const PMF pz = convolve_sum(pz1, binom_pmf(z2));
    const PMF pw = convolve_sum(pw1, binom_pmf(w2));
    const PMF z1_minus_w1 = convolve_diff(pz1, pw1);
    const PMF z_minus_w = convolve_diff(pz, pw);
    const PMF z1_minus_w = convolve_diff(pz1, pw);

    Sandwich s;
    s.middle = z_minus_w.upper_tail(l) - z1_minus_w1.upper_tail(l);
    s.lhs = -static_cast<double>(w2.trials) * w2.prob * z1_minus_w1.max_mass();
    s.rhs = static_cast<double>(z2.trials) * z2.prob * z1_minus_w.max_mass();
    return s;
}

FourRvCheck check_four_rv(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3, std::uint64_t n4, double p,
                          std::int64_t l) {
    require_open_prob(p, "check_four_rv");
    require_guard(n1 + n2 + n3 + n4, "check_four_rv");
    const std::uint64_t n0 = std::min({n1, n2, n3, n4});
    if (n0 == 0) {
        throw std::invalid_argument("check_four_rv: every trial count must be positive");
    }
    const PMF primed = binom_diff_pmf({n1, p}, {n2, p});
    const PMF plain = binom_diff_pmf({n3, p}, {n4, p});
    FourRvCheck check;
    check.difference = std::abs(primed.upper_tail(l) - plain.upper_tail(l));
    const auto delta = static_cast<double>(std::max(n1 > n3 ? n1 - n3 : n3 - n1, n2 > n4 ? n2 - n4 : n4 - n2));
    check.scale = p * delta / std::sqrt(p * static_cast<double>(n0));
    if (check.scale > 0.0) {
        check.ratio = check.difference / check.scale;
    } else {
        check.ratio = check.difference == 0.0 ? 0.0 : INFINITY;
    }
    return check;
}

double berry_esseen_gap(std::uint64_t n, double p) {
    require_open_prob(p, "berry_esseen_gap");
    if (n == 0 || n > kMaxBerryEsseenTrials) {
        throw std::invalid_argument("berry_esseen_gap: n must lie in [1, " + std::to_string(kMaxBerryEsseenTrials) +
                                    "]");
    }
    const PMF pmf = binom_pmf({n, p});
    const double mean = static_cast<double>(n) * p;
    const double sigma = std::sqrt(mean * (1.0 - p));
    double gap = 0.0;
    double cdf = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i < pmf.masses.size(); ++i) {
        const double x = (static_cast<double>(pmf.lo() + static_cast<std::int64_t>(i)) - mean) / sigma;
        const double normal = phi(x);
        const double left = cdf + carry;
        gap = std::max(gap, std::abs(left - normal));
        const double v = pmf.masses[i];
        const double t = cdf + v;
        carry += std::abs(cdf) >= std::abs(v) ? (cdf - t) + v : (v - t) + cdf;
        cdf = t;
        gap = std::max(gap, std::abs(std::min(1.0, cdf + carry) - normal));
    }
    return gap;
}

}  // namespace majdyn::probkit
