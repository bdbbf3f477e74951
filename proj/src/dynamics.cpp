#include "majdyn/dynamics.hpp"

#include <stdexcept>
#include <string>

#include "majdyn/simd/kernels.hpp"

namespace majdyn {
namespace {

void require_same_size(const Graph& g, const OpinionVector& s, const char* what) {
    if (s.size() != g.n()) {
        throw std::invalid_argument(std::string(what) + ": opinion vector has " + std::to_string(s.size()) +
                                    " entries, graph has " + std::to_string(g.n()) + " vertices");
    }
}

// Unanimous iff every coordinate carries the same sign.
int unanimous_sign(const OpinionVector& s) {
    const auto words = s.words();
    if (words.empty()) {
        return 0;
    }
    const std::size_t tail = s.size() % 64;
    const std::uint64_t last_full = tail == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail) - 1;
    bool all_pos = true;
    bool all_neg = true;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        all_pos = all_pos && words[i] == ~std::uint64_t{0};
        all_neg = all_neg && words[i] == 0;
    }
    all_pos = all_pos && words.back() == last_full;
    all_neg = all_neg && words.back() == 0;
    return all_pos ? 1 : (all_neg ? -1 : 0);
}

}  // namespace

std::uint64_t positives(const OpinionVector& s) { return simd::active_kernels().popcount(s.words()); }

std::int64_t bias(const OpinionVector& s) {
    return 2 * static_cast<std::int64_t>(positives(s)) - static_cast<std::int64_t>(s.size());
}

std::uint64_t hamming(const OpinionVector& a, const OpinionVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming: size mismatch");
    }
    return simd::active_kernels().hamming(a.words(), b.words());
}

std::int64_t neighbor_sum(const Graph& g, const OpinionVector& s, Vertex v) {
    require_same_size(g, s, "neighbor_sum");
    if (v >= g.n()) {
        throw std::out_of_range("neighbor_sum: vertex " + std::to_string(v) + " out of range");
    }
    std::int64_t sum = 0;
    for (Vertex u : g.neighbors(v)) {
        sum += s.sign(u);
    }
    return sum;
}

std::vector<std::int32_t> neighbor_sums(const Graph& g, const OpinionVector& s) {
    require_same_size(g, s, "neighbor_sums");
    std::vector<std::uint32_t> counts(g.n());
    simd::active_kernels().positive_neighbor_counts(g.csr(), s.words().data(), counts.data());
    std::vector<std::int32_t> sums(g.n());
    for (std::size_t v = 0; v < g.n(); ++v) {
        sums[v] = 2 * static_cast<std::int32_t>(counts[v]) - static_cast<std::int32_t>(g.degree(static_cast<Vertex>(v)));
    }
    return sums;
}

void majority_step_into(const Graph& g, const OpinionVector& s, OpinionVector& out) {
    require_same_size(g, s, "majority_step");
    if (out.size() != s.size()) {
        out = OpinionVector(s.size());
    }
    simd::active_kernels().majority_update(g.csr(), s.words().data(), out.words().data());
}

OpinionVector majority_step(const Graph& g, const OpinionVector& s) {
    OpinionVector out(s.size());
    majority_step_into(g, s, out);
    return out;
}

std::string_view to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::Unanimous:
            return "unanimous";
        case Outcome::PeriodTwo:
            return "period_two";
        case Outcome::DayCapReached:
            return "day_cap";
    }
    return "unknown";
}

std::int64_t Trajectory::bias_at(std::size_t day) const {
    if (day < days.size()) {
        return days[day].bias;
    }
    if (days.empty()) {
        throw std::out_of_range("bias_at: empty trajectory");
    }
    const std::size_t last = days.size() - 1;
    switch (outcome) {
        case Outcome::Unanimous:
            return days[last].bias;
        case Outcome::PeriodTwo:
            if (period == 1 || (day - last) % 2 == 0) {
                return days[last].bias;
            }
            return days[last - 1].bias;
        case Outcome::DayCapReached:
            break;
    }
    throw std::out_of_range("bias_at: day " + std::to_string(day) + " beyond a capped run");
}

Trajectory run(const Graph& g, const OpinionVector& s0, std::uint32_t day_cap) {
    require_same_size(g, s0, "run");
    if (day_cap == 0) {
        throw std::invalid_argument("run: day_cap must be at least 1");
    }
    Trajectory traj;
    traj.day_cap = day_cap;
    const std::uint64_t pos0 = positives(s0);
    traj.days.push_back({2 * static_cast<std::int64_t>(pos0) - static_cast<std::int64_t>(g.n()), 0, pos0});
    if (int sign = unanimous_sign(s0); sign != 0) {
        traj.outcome = Outcome::Unanimous;
        traj.sign = sign;
        traj.outcome_day = 0;
        return traj;
    }

    OpinionVector before_prev;
    OpinionVector prev = s0;
    OpinionVector cur(g.n());
    for (std::uint32_t day = 1; day <= day_cap; ++day) {
        majority_step_into(g, prev, cur);
        const std::uint64_t pos = positives(cur);
        const std::uint64_t flips = hamming(prev, cur);
        traj.days.push_back({2 * static_cast<std::int64_t>(pos) - static_cast<std::int64_t>(g.n()), flips, pos});

        if (int sign = unanimous_sign(cur); sign != 0) {
            traj.outcome = Outcome::Unanimous;
            traj.sign = sign;
            traj.outcome_day = day;
            return traj;
        }
        if (flips == 0) {
            traj.outcome = Outcome::PeriodTwo;
            traj.period = 1;
            traj.outcome_day = day;
            return traj;
        }
        if (day >= 2 && cur == before_prev) {
            traj.outcome = Outcome::PeriodTwo;
            traj.period = 2;
            traj.outcome_day = day;
            return traj;
        }
        std::swap(before_prev, prev);
        std::swap(prev, cur);
        if (cur.size() != g.n()) {
            cur = OpinionVector(g.n());
        }
    }
    traj.outcome = Outcome::DayCapReached;
    traj.outcome_day = day_cap;
    return traj;
}

}  // namespace majdyn
