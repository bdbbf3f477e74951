#include "majdyn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <type_traits>

#include "majdyn/graph.hpp"
#include "majdyn/rng.hpp"

namespace majdyn {
namespace {

constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kOpinionStream = 2;
constexpr std::uint64_t kSwingStream = 3;
constexpr std::uint64_t kQuenchedGraphStream = 0xFFFFFFFFFFFFFFFFULL;

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
}

TrialRow run_trial(const ExperimentConfig& cfg, double p, std::uint64_t index, const Graph* shared) {
    TrialRow row;
    row.index = index;
    row.seed = trial_seed(cfg.master_seed, index);
    try {
        Graph local;
        if (shared == nullptr) {
            local = sample_gnp(cfg.n, p, derive_seed(row.seed, kGraphStream));
        }
        const Graph& g = shared != nullptr ? *shared : local;
        row.edge_count = g.edge_count();

        const std::uint64_t opinion_seed = derive_seed(row.seed, kOpinionStream);
        OpinionVector s0;
        std::optional<TrialCensus> census_fields;
        std::visit(
            [&](const auto& model) {
                using T = std::decay_t<decltype(model)>;
                if constexpr (std::is_same_v<T, UniformRandom>) {
                    s0 = sample_uniform(cfg.n, opinion_seed);
                } else if constexpr (std::is_same_v<T, FixedDiscrepancy>) {
                    s0 = sample_fixed_discrepancy(cfg.n, model.d, opinion_seed);
                } else {
                    const OpinionVector r0 = sample_morning(cfg.n, opinion_seed);
                    SwingResult swung = apply_swing(r0, model.c, derive_seed(row.seed, kSwingStream));
                    if (cfg.gamma) {
                        const CensusReport rep = census(g, r0, swung.swing_set, *cfg.gamma, p);
                        TrialCensus tc;
                        tc.almost_positive = rep.almost_positive;
                        tc.unstable = rep.unstable;
                        tc.unstable_with_swing = rep.unstable_with_swing;
                        tc.excess = rep.excess;
                        tc.alpha = static_cast<double>(rep.excess) / (p * std::pow(static_cast<double>(cfg.n), 1.5));
                        tc.swing_count = swung.swing_set.size();
                        census_fields = tc;
                    }
                    s0 = std::move(swung.evening);
                }
            },
            cfg.model);

        const Trajectory traj = run(g, s0, cfg.day_cap);
        row.biases.reserve(traj.days.size());
        for (const auto& day : traj.days) {
            row.biases.push_back(day.bias);
        }
        row.outcome = traj.outcome;
        row.outcome_day = traj.outcome_day;
        row.period = traj.period;
        row.final_sign = traj.sign;
        if (census_fields) {
            if (traj.outcome != Outcome::DayCapReached || traj.days.size() > 2) {
                census_fields->day2_bias = traj.bias_at(2);
            } else {
                census_fields->day2_bias = bias(majority_step(g, majority_step(g, s0)));
            }
            row.census = census_fields;
        }
    } catch (const std::exception& e) {
        TrialRow failed;
        failed.index = row.index;
        failed.seed = row.seed;
        failed.error = e.what();
        return failed;
    }
    return row;
}

// Bias on `day`, extending a finished run by its periodic behavior.
std::optional<std::int64_t> row_bias_at(const TrialRow& row, std::size_t day) {
    if (row.biases.empty()) {
        return std::nullopt;
    }
    if (day < row.biases.size()) {
        return row.biases[day];
    }
    const std::size_t last = row.biases.size() - 1;
    switch (row.outcome) {
        case Outcome::Unanimous:
            return row.biases[last];
        case Outcome::PeriodTwo:
            if (row.period == 1 || (day - last) % 2 == 0) {
                return row.biases[last];
            }
            return row.biases[last - 1];
        case Outcome::DayCapReached:
            break;
    }
    return std::nullopt;
}

std::vector<GrowthColumn> growth_columns(const std::vector<TrialRow>& trials, std::uint32_t days) {
    std::vector<GrowthColumn> columns;
    for (std::uint32_t t = 0; t < days; ++t) {
        GrowthColumn col;
        col.day = t;
        std::vector<double> ratios;
        for (const auto& row : trials) {
            if (!row.error.empty()) {
                continue;
            }
            const auto now = row_bias_at(row, t);
            const auto next = row_bias_at(row, t + 1);
            if (!now || !next || *now == 0) {
                ++col.skipped;
                continue;
            }
            ratios.push_back(std::abs(static_cast<double>(*next)) / std::abs(static_cast<double>(*now)));
        }
        col.samples = ratios.size();
        col.median_ratio = median(std::move(ratios));
        columns.push_back(col);
    }
    return columns;
}

int sgn(std::int64_t x) { return (x > 0) - (x < 0); }

}  // namespace

std::optional<double> median(std::vector<double> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

Quantiles quantiles(std::vector<double> values) {
    Quantiles q;
    if (values.empty()) {
        return q;
    }
    std::sort(values.begin(), values.end());
    auto at = [&](double level) {
        const double h = level * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    q.min = values.front();
    q.q10 = at(0.10);
    q.q25 = at(0.25);
    q.median = at(0.50);
    q.q75 = at(0.75);
    q.q90 = at(0.90);
    q.max = values.back();
    return q;
}

Aggregates aggregate(const std::vector<TrialRow>& trials) {
    Aggregates agg;
    agg.trials = trials.size();
    std::vector<double> days;
    std::uint64_t by_day6 = 0;
    std::vector<double> alphas;
    std::vector<double> excesses;
    std::uint64_t positive_excess = 0;
    for (const auto& row : trials) {
        if (!row.error.empty()) {
            ++agg.failed;
            continue;
        }
        if (row.outcome == Outcome::Unanimous) {
            ++agg.unanimous;
            days.push_back(row.outcome_day);
            by_day6 += row.outcome_day <= 6 ? 1 : 0;
            if (!row.biases.empty() && row.biases[0] != 0) {
                ++agg.sign_checked;
                agg.sign_matches += row.final_sign == sgn(row.biases[0]) ? 1 : 0;
            }
        }
        if (row.census) {
            alphas.push_back(row.census->alpha);
            excesses.push_back(static_cast<double>(row.census->excess));
            positive_excess += row.census->excess > 0 ? 1 : 0;
        }
    }
    if (agg.trials > 0) {
        agg.unanimity_fraction = static_cast<double>(agg.unanimous) / static_cast<double>(agg.trials);
        agg.unanimous_by_day6_fraction = static_cast<double>(by_day6) / static_cast<double>(agg.trials);
    }
    agg.median_unanimity_day = median(std::move(days));
    if (agg.sign_checked > 0) {
        agg.sign_match_fraction = static_cast<double>(agg.sign_matches) / static_cast<double>(agg.sign_checked);
    }
    agg.growth = growth_columns(trials, kGrowthDays);
    if (!alphas.empty()) {
        ExcessSummary ex;
        ex.trials = alphas.size();
        ex.positive = positive_excess;
        ex.positive_fraction = static_cast<double>(positive_excess) / static_cast<double>(alphas.size());
        ex.alpha = quantiles(std::move(alphas));
        ex.excess = quantiles(std::move(excesses));
        agg.excess = ex;
    }
    return agg;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    report.resolved_p = cfg.resolved_p();
    report.trials.resize(cfg.trials);

    std::optional<Graph> shared;
    if (cfg.quenched) {
        shared = sample_gnp(cfg.n, report.resolved_p, derive_seed(cfg.master_seed, kQuenchedGraphStream));
    }
    const Graph* shared_ptr = shared ? &*shared : nullptr;
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        report.trials[i] = run_trial(cfg, report.resolved_p, i, shared_ptr);
    });
    report.aggregates = aggregate(report.trials);
    return report;
}

GrowthTable growth_ratio_experiment(const ExperimentConfig& cfg, std::uint32_t days) {
    if (!std::holds_alternative<UniformRandom>(cfg.model)) {
        throw std::invalid_argument("growth_ratio_experiment: requires the uniform model");
    }
    const ExperimentReport report = run_experiment(cfg);
    GrowthTable table;
    table.sqrt_np = std::sqrt(static_cast<double>(cfg.n) * report.resolved_p);
    table.columns = growth_columns(report.trials, days);
    return table;
}

ExcessSummary census_experiment(const ExperimentConfig& cfg) {
    if (!std::holds_alternative<MorningEvening>(cfg.model) || !cfg.gamma) {
        throw std::invalid_argument("census_experiment: requires the morning_evening model and gamma");
    }
    ExperimentReport report = run_experiment(cfg);
    if (!report.aggregates.excess) {
        throw std::runtime_error("census_experiment: every trial failed");
    }
    return *report.aggregates.excess;
}

std::int64_t contraction_floor(double beta, double p, double delta) {
    if (!(p > 0.0) || !(delta > 0.0 && delta < 1.0) || !(beta >= 0.0)) {
        throw std::invalid_argument("contraction_floor: need beta >= 0, p > 0 and delta in (0, 1)");
    }
    return static_cast<std::int64_t>(std::ceil(8.0 * beta / (p * std::sqrt(delta))));
}

ContractionTable contraction_experiment(const ExperimentConfig& cfg, std::int64_t bias_floor, double delta) {
    if (std::holds_alternative<MorningEvening>(cfg.model)) {
        throw std::invalid_argument("contraction_experiment: requires the uniform or fixed_discrepancy model");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("contraction_experiment: delta must lie in (0, 1)");
    }
    const ExperimentReport report = run_experiment(cfg);
    ContractionTable table;
    table.bias_floor = bias_floor;
    table.delta = delta;
    const auto n = static_cast<double>(cfg.n);
    std::uint64_t jumps = 0;
    std::uint64_t decays = 0;
    for (const auto& trial : report.trials) {
        ContractionRow row;
        row.trial = trial.index;
        if (trial.error.empty()) {
            const auto crossing = std::find_if(trial.biases.begin(), trial.biases.end(),
                                               [&](std::int64_t b) { return std::abs(b) >= bias_floor; });
            const auto next = crossing == trial.biases.end()
                                  ? std::nullopt
                                  : row_bias_at(trial, static_cast<std::size_t>(crossing - trial.biases.begin()) + 1);
            if (next) {
                row.qualifies = true;
                row.crossing_day = static_cast<std::uint32_t>(crossing - trial.biases.begin());
                const int side = sgn(*crossing);
                const std::size_t end = std::max<std::size_t>(trial.biases.size(), row.crossing_day + 2);
                for (std::size_t t = row.crossing_day; t < end; ++t) {
                    const std::int64_t s = *row_bias_at(trial, t);
                    row.minority_counts.push_back(static_cast<std::uint64_t>((static_cast<std::int64_t>(cfg.n) - side * s) / 2));
                }
                row.next_day_sum_share = static_cast<double>(side * *next) / n;
                row.jump_ok = row.next_day_sum_share >= 1.0 - delta / 2.0;
                row.decay_monotone = true;
                for (std::size_t k = 2; k < row.minority_counts.size(); ++k) {
                    row.decay_monotone = row.decay_monotone && row.minority_counts[k] <= row.minority_counts[k - 1];
                }
                ++table.qualifying;
                jumps += row.jump_ok ? 1 : 0;
                decays += row.decay_monotone ? 1 : 0;
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.qualifying > 0) {
        table.jump_fraction = static_cast<double>(jumps) / static_cast<double>(table.qualifying);
        table.decay_fraction = static_cast<double>(decays) / static_cast<double>(table.qualifying);
    }
    return table;
}

std::vector<SweepRow> bias_sweep(const ExperimentConfig& cfg, const std::vector<std::int64_t>& d_values) {
    std::vector<ExperimentConfig> configs;
    for (std::int64_t d : d_values) {
        ExperimentConfig c = cfg;
        c.model = FixedDiscrepancy{d};
        c.validate();
        configs.push_back(std::move(c));
    }
    std::vector<SweepRow> rows;
    for (const auto& c : configs) {
        const ExperimentReport report = run_experiment(c);
        SweepRow row;
        row.d = std::get<FixedDiscrepancy>(c.model).d;
        row.trials = report.trials.size();
        std::uint64_t plus = 0;
        std::uint64_t minus = 0;
        for (const auto& t : report.trials) {
            if (t.error.empty() && t.outcome == Outcome::Unanimous) {
                plus += t.final_sign > 0 ? 1 : 0;
                minus += t.final_sign < 0 ? 1 : 0;
            }
        }
        const auto total = static_cast<double>(row.trials);
        row.unanimity_fraction = report.aggregates.unanimity_fraction;
        row.plus_fraction = static_cast<double>(plus) / total;
        row.minus_fraction = static_cast<double>(minus) / total;
        row.agreement_fraction = row.d < 0 ? row.minus_fraction : row.plus_fraction;
        row.median_unanimity_day = report.aggregates.median_unanimity_day;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace majdyn
