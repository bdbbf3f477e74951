#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "majdyn/config.hpp"
#include "majdyn/dynamics.hpp"
#include "majdyn/opinions.hpp"

namespace majdyn {

struct TrialCensus {
    std::uint64_t almost_positive = 0;
    std::uint64_t unstable = 0;
    std::uint64_t unstable_with_swing = 0;
    std::int64_t excess = 0;
    /// excess / (p n^{3/2})
    double alpha = 0.0;
    std::uint64_t swing_count = 0;
    /// Bias of the evening trajectory on day 2.
    std::int64_t day2_bias = 0;

    friend bool operator==(const TrialCensus&, const TrialCensus&) = default;
};

struct TrialRow {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    std::uint64_t edge_count = 0;
    /// Bias on each recorded day, day 0 first.
    std::vector<std::int64_t> biases;
    Outcome outcome = Outcome::DayCapReached;
    std::uint32_t outcome_day = 0;
    std::uint32_t period = 0;
    /// Sign of a unanimous end state, else 0.
    int final_sign = 0;
    std::optional<TrialCensus> census;
    /// Non-empty when the trial failed; the other fields are then unset.
    std::string error;

    std::optional<std::uint32_t> unanimity_day() const {
        if (outcome == Outcome::Unanimous) {
            return outcome_day;
        }
        return std::nullopt;
    }

    friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

struct Quantiles {
    double min = 0.0;
    double q10 = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double q90 = 0.0;
    double max = 0.0;

    friend bool operator==(const Quantiles&, const Quantiles&) = default;
};

/// Linear-interpolation quantiles. Empty input gives all zeros.
Quantiles quantiles(std::vector<double> values);

/// Median with the two-middle average for even counts. Empty input gives nullopt.
std::optional<double> median(std::vector<double> values);

struct GrowthColumn {
    /// Ratio |S_{day+1}| / |S_day|.
    std::uint32_t day = 0;
    std::uint64_t samples = 0;
    /// Trials skipped because S_day = 0 or the day is beyond a capped run.
    std::uint64_t skipped = 0;
    std::optional<double> median_ratio;

    friend bool operator==(const GrowthColumn&, const GrowthColumn&) = default;
};

struct ExcessSummary {
    std::uint64_t trials = 0;
    std::uint64_t positive = 0;
    double positive_fraction = 0.0;
    /// Quantiles of the empirical alpha = excess / (p n^{3/2}).
    Quantiles alpha;
    Quantiles excess;

    friend bool operator==(const ExcessSummary&, const ExcessSummary&) = default;
};

struct Aggregates {
    std::uint64_t trials = 0;
    std::uint64_t failed = 0;
    std::uint64_t unanimous = 0;
    double unanimity_fraction = 0.0;
    std::optional<double> median_unanimity_day;
    /// Unanimous trials finishing on day 6 or earlier, over all trials.
    double unanimous_by_day6_fraction = 0.0;
    /// Unanimous trials with S_0 != 0, and those whose final sign is sgn(S_0).
    std::uint64_t sign_checked = 0;
    std::uint64_t sign_matches = 0;
    std::optional<double> sign_match_fraction;
    std::vector<GrowthColumn> growth;
    std::optional<ExcessSummary> excess;

    friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct ExperimentReport {
    ExperimentConfig config;
    double resolved_p = 0.0;
    std::vector<TrialRow> trials;
    Aggregates aggregates;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Growth columns computed by run_experiment.
inline constexpr std::uint32_t kGrowthDays = 3;

/// Recomputes the aggregates from trial rows alone.
Aggregates aggregate(const std::vector<TrialRow>& trials);

/// Runs cfg.trials independent trials: sample G(n, p) (once when quenched),
/// draw initial opinions from the model, run the dynamics to an outcome, and
/// take the vertex census when the model is morning/evening and gamma is set.
/// The report is identical for every thread count.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

struct GrowthTable {
    double sqrt_np = 0.0;
    std::vector<GrowthColumn> columns;
};

/// Median bias growth ratio per day for the uniform model.
GrowthTable growth_ratio_experiment(const ExperimentConfig& cfg, std::uint32_t days = kGrowthDays);

/// Census statistics; requires the morning/evening model and gamma.
ExcessSummary census_experiment(const ExperimentConfig& cfg);

struct ContractionRow {
    std::uint64_t trial = 0;
    bool qualifies = false;
    /// First day with |S_t| >= bias_floor.
    std::uint32_t crossing_day = 0;
    /// Minority-opinion counts from the crossing day through the end of the run.
    std::vector<std::uint64_t> minority_counts;
    /// S_{t+1} / n oriented by the majority sign at the crossing.
    double next_day_sum_share = 0.0;
    /// next_day_sum_share >= 1 - delta/2.
    bool jump_ok = false;
    /// Minority count never increases after the crossing day.
    bool decay_monotone = false;
};

struct ContractionTable {
    std::int64_t bias_floor = 0;
    double delta = 0.0;
    std::vector<ContractionRow> rows;
    std::uint64_t qualifying = 0;
    double jump_fraction = 0.0;
    double decay_fraction = 0.0;
};

/// Smallest integer floor that triggers the jump guarantee for a graph with
/// jumbledness beta and minimum degree delta * n * p: ceil(8 beta / (p sqrt(delta))).
std::int64_t contraction_floor(double beta, double p, double delta);

/// Tracks trials once their bias reaches bias_floor; uniform or fixed
/// discrepancy models only.
ContractionTable contraction_experiment(const ExperimentConfig& cfg, std::int64_t bias_floor, double delta = 0.9);

struct SweepRow {
    std::int64_t d = 0;
    std::uint64_t trials = 0;
    double unanimity_fraction = 0.0;
    /// Unanimous with sign = sgn(d); for d = 0 the plus-unanimity share.
    double agreement_fraction = 0.0;
    double plus_fraction = 0.0;
    double minus_fraction = 0.0;
    std::optional<double> median_unanimity_day;
};

/// Unanimity statistics for each initial discrepancy; every d must share the
/// parity of n.
std::vector<SweepRow> bias_sweep(const ExperimentConfig& cfg, const std::vector<std::int64_t>& d_values);

}  // namespace majdyn
