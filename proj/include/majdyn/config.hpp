#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "majdyn/dynamics.hpp"
#include "majdyn/opinions.hpp"

namespace majdyn {

/// Edge probability: either explicit, or coefficient * n^exponent * ln(n)^log_power.
struct PSpec {
    std::optional<double> value;
    double coefficient = 1.0;
    double exponent = 0.0;
    double log_power = 0.0;

    static PSpec explicit_p(double p) { return PSpec{p}; }
    /// lambda' * n^{-3/5} * ln n
    static PSpec lower(double lambda_prime = 1.0) { return PSpec{std::nullopt, lambda_prime, -0.6, 1.0}; }
    /// lambda * n^{-1/2}
    static PSpec upper(double lambda = 1.0) { return PSpec{std::nullopt, lambda, -0.5, 0.0}; }

    double resolve(std::size_t n) const;

    friend bool operator==(const PSpec&, const PSpec&) = default;
};

enum class ReportFormat { Csv, Json };

struct ExperimentConfig {
    std::size_t n = 1000;
    PSpec p = PSpec::explicit_p(0.01);
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    OpinionModel model = UniformRandom{};
    std::optional<double> gamma;
    std::uint32_t day_cap = kDefaultDayCap;
    /// Sample one graph and reuse it for every trial.
    bool quenched = false;
    /// Worker threads; 0 means one per hardware thread. Never affects results.
    unsigned threads = 0;
    ReportFormat format = ReportFormat::Csv;

    double resolved_p() const { return p.resolve(n); }

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Seed of trial `index`, independent of scheduling.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

/// Config file keys, in echo order.
const std::vector<std::string>& config_keys();

/// Flat JSON object with the experiment-defining keys. Execution settings
/// (threads, format) are omitted so reports do not depend on them.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

/// Applies the keys of `object` on top of `base`. Unknown keys and ill-typed
/// values throw std::invalid_argument.
ExperimentConfig apply_config_json(ExperimentConfig base, const nlohmann::json& object);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies "key=value" overrides. The value is read as JSON when it parses,
/// otherwise as a string.
ExperimentConfig apply_overrides(ExperimentConfig base, const std::vector<std::string>& overrides);

}  // namespace majdyn
