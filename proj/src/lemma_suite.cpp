#include "majdyn/lemma_suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "majdyn/probkit.hpp"
#include "majdyn/rng.hpp"

namespace majdyn::probkit {
namespace {

LemmaCheckRow make_row(std::string name, std::uint64_t cases, double worst, double limit, std::string detail = {}) {
    LemmaCheckRow row;
    row.name = std::move(name);
    row.cases = cases;
    row.worst = worst;
    row.limit = limit;
    row.pass = worst <= limit;
    row.detail = std::move(detail);
    return row;
}

std::string format_range(const char* label, double lo, double hi) {
    std::ostringstream os;
    os << label << " in [" << lo << ", " << hi << "]";
    return os.str();
}

// Exact tail minus bound, maximized over a grid of deviations; <= 0 when the
// bounds are valid.
std::pair<double, double> chernoff_margins(std::uint64_t n, double p) {
    const PMF pmf = binom_pmf({n, p});
    const double mu = static_cast<double>(n) * p;
    const double sigma = std::sqrt(mu * (1.0 - p));
    double upper = -std::numeric_limits<double>::infinity();
    double lower = upper;
    for (int k = 0; k < 20; ++k) {
        const double t = k * (4.0 * sigma + 4.0) / 19.0;
        const double up_exact = pmf.upper_tail(static_cast<std::int64_t>(std::ceil(mu + t)));
        const double low_exact = pmf.lower_tail(static_cast<std::int64_t>(std::floor(mu - t)));
        upper = std::max(upper, up_exact - chernoff_upper(mu, t));
        lower = std::max(lower, low_exact - chernoff_lower(mu, t));
    }
    return {upper, lower};
}

}  // namespace

std::vector<LemmaCheckRow> run_lemma_suite(std::uint64_t cases, std::uint64_t seed) {
    cases = std::max<std::uint64_t>(cases, 1);
    std::vector<LemmaCheckRow> rows;

    {
        Rng rng(derive_seed(seed, 1));
        double upper = -1.0;
        double lower = -1.0;
        for (std::uint64_t i = 0; i < cases; ++i) {
            const std::uint64_t n = 1 + rng.below(5000);
            for (double p : {0.01, 0.1, 0.5}) {
                auto [u, l] = chernoff_margins(n, p);
                upper = std::max(upper, u);
                lower = std::max(lower, l);
            }
        }
        rows.push_back(make_row("chernoff_upper", cases * 3, upper, kExactTolerance, "max(exact tail - bound)"));
        rows.push_back(make_row("chernoff_lower", cases * 3, lower, kExactTolerance, "max(exact tail - bound)"));
    }

    {
        Rng rng(derive_seed(seed, 2));
        double worst = -std::numeric_limits<double>::infinity();
        const std::uint64_t pairs = std::max<std::uint64_t>(cases * 50, 10000);
        for (std::uint64_t i = 0; i < pairs; ++i) {
            const double x = -8.0 + 16.0 * rng.uniform();
            const double y = -8.0 + 16.0 * rng.uniform();
            worst = std::max(worst, std::abs(psi(x) - psi(y)) - std::abs(x - y));
        }
        rows.push_back(make_row("psi_contraction", pairs, worst, 0.0, "max(|psi(x)-psi(y)| - |x-y|)"));
    }

    {
        double worst = -std::numeric_limits<double>::infinity();
        std::uint64_t count = 0;
        for (double c : {1.0, 2.0, 3.0}) {
            const double constant = std::exp(-c * c / 2.0) / std::sqrt(2.0 * std::numbers::pi);
            constexpr int kSteps = 120;
            for (int i = 0; i <= kSteps; ++i) {
                for (int j = 0; j <= kSteps; ++j) {
                    const double x = -c + 2.0 * c * i / kSteps;
                    const double y = -c + 2.0 * c * j / kSteps;
                    if (!(x + y < 0.0) || std::abs(x) + std::abs(y) > c) {
                        continue;
                    }
                    ++count;
                    worst = std::max(worst, 1.0 - constant * (x + y) - (psi(x) + psi(y)));
                }
            }
        }
        rows.push_back(make_row("psi_lower_bound", count, worst, kPsiTolerance, "max(1 - C(x+y) - psi(x) - psi(y))"));
    }

    {
        Rng rng(derive_seed(seed, 3));
        double worst = 0.0;
        for (std::uint64_t i = 0; i < cases; ++i) {
            const std::uint64_t n = 1 + rng.below(100000);
            const double p = 0.01 + 0.98 * rng.uniform();
            worst = std::max(worst, berry_esseen_gap(n, p) * std::sqrt(static_cast<double>(n) * p * (1.0 - p)));
        }
        rows.push_back(make_row("berry_esseen_envelope", cases, worst, kBerryEsseenEnvelope, "max(gap * sigma)"));
    }

    {
        double worst = 0.0;
        std::uint64_t count = 0;
        for (double p : {0.01, 0.05, 0.1, 0.3, 0.5}) {
            auto n = static_cast<std::uint64_t>(std::ceil(1.0 / (p * (1.0 - p))));
            for (; 4 * n <= 250000; n *= 4) {
                worst = std::max(worst, berry_esseen_gap(4 * n, p) / berry_esseen_gap(n, p));
                ++count;
            }
        }
        rows.push_back(make_row("berry_esseen_scaling", count, worst, kBerryEsseenQuadrupleRatio,
                                "max(gap(4n) / gap(n)) for sigma >= 1"));
    }

    {
        Rng rng(derive_seed(seed, 4));
        double worst = 0.0;
        for (std::uint64_t i = 0; i < cases; ++i) {
            const std::uint64_t n = 1 + rng.below(400);
            const std::uint64_t m = 1 + rng.below(400);
            const double p = 0.02 + 0.96 * rng.uniform();
            worst = std::max(worst, check_binom_shift({n, p}, {m, p}).ratio);
        }
        rows.push_back(make_row("binom_shift", cases, worst, kShiftConstant, "max(max_t diff * (m+n)p(1-p))"));
    }

    {
        Rng rng(derive_seed(seed, 5));
        double theta_lo = std::numeric_limits<double>::infinity();
        double theta_hi = 0.0;
        double ge_worst = 0.0;
        for (std::uint64_t i = 0; i < cases; ++i) {
            const std::uint64_t n = 100 + rng.below(1901);
            const auto spread = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(n))));
            const std::int64_t shift = static_cast<std::int64_t>(rng.below(2 * static_cast<std::uint64_t>(spread) + 1)) - spread;
            const auto m = static_cast<std::uint64_t>(static_cast<std::int64_t>(n) + shift);
            const double np = 10.0 + rng.uniform() * (std::min(200.0, 0.1 * static_cast<double>(n)) - 10.0);
            const double p = np / static_cast<double>(n);
            const EqualityCheck check = check_equality_prob({n, p}, {m, p});
            theta_lo = std::min(theta_lo, check.theta_ratio);
            theta_hi = std::max(theta_hi, check.theta_ratio);
            ge_worst = std::max(ge_worst, check.ge_ratio);
        }
        LemmaCheckRow theta = make_row("equality_theta", cases, theta_hi, kThetaHigh,
                                       format_range("P[X=Y]sqrt(np)", theta_lo, theta_hi));
        theta.pass = theta_lo >= kThetaLow && theta_hi <= kThetaHigh;
        rows.push_back(std::move(theta));
        rows.push_back(make_row("equality_greater_equal", cases, ge_worst, kGreaterEqualConstant,
                                "max(|P[X>=Y]-1/2| sqrt(np) / (1+|n-m|p))"));
    }

    {
        Rng rng(derive_seed(seed, 6));
        double worst = -std::numeric_limits<double>::infinity();
        for (std::uint64_t i = 0; i < cases; ++i) {
            const std::uint64_t n = 1 + rng.below(500);
            const double p = 0.01 + 0.98 * rng.uniform();
            worst = std::max(worst, 0.5 - check_equality_prob({n, p}, {n, p}).p_greater_equal);
        }
        rows.push_back(make_row("equality_symmetric", cases, worst, kExactTolerance, "max(1/2 - P[X>=Y]) for n = m"));
    }

    {
        Rng rng(derive_seed(seed, 7));
        double worst = -std::numeric_limits<double>::infinity();
        for (std::uint64_t i = 0; i < cases; ++i) {
            auto spec = [&] { return BinomSpec{rng.below(61), rng.uniform()}; };
            const BinomSpec z1 = spec();
            const BinomSpec z2 = spec();
            const BinomSpec w1 = spec();
            const BinomSpec w2 = spec();
            const std::int64_t l = static_cast<std::int64_t>(rng.below(61)) - 30;
            const Sandwich s = check_coupling(z1, z2, w1, w2, l);
            worst = std::max({worst, s.lhs - s.middle, s.middle - s.rhs});
        }
        rows.push_back(make_row("coupling_sandwich", cases, worst, kExactTolerance, "max violation of lhs<=middle<=rhs"));
    }

    {
        Rng rng(derive_seed(seed, 8));
        double worst = 0.0;
        for (std::uint64_t i = 0; i < cases; ++i) {
            std::uint64_t n[4];
            for (auto& x : n) {
                x = 20 + rng.below(381);
            }
            const double p = 0.02 + 0.48 * rng.uniform();
            const double mean = (static_cast<double>(n[2]) - static_cast<double>(n[3])) * p;
            const double sd = std::sqrt(static_cast<double>(n[2] + n[3]) * p * (1.0 - p));
            const auto l = static_cast<std::int64_t>(std::llround(mean + (6.0 * rng.uniform() - 3.0) * sd));
            worst = std::max(worst, check_four_rv(n[0], n[1], n[2], n[3], p, l).ratio);
        }
        rows.push_back(make_row("four_rv", cases, worst, kFourRvConstant, "max(difference / (p Delta / sqrt(p n0)))"));
    }

    return rows;
}

}  // namespace majdyn::probkit
