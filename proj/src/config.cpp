#include "majdyn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <type_traits>

#include "majdyn/rng.hpp"

namespace majdyn {

using nlohmann::json;
using nlohmann::ordered_json;

double PSpec::resolve(std::size_t n) const {
    if (value) {
        return *value;
    }
    const auto dn = static_cast<double>(n);
    return coefficient * std::pow(dn, exponent) * std::pow(std::log(dn), log_power);
}

void ExperimentConfig::validate() const {
    if (n == 0) {
        throw std::invalid_argument("config: n must be at least 1");
    }
    if (n > 0xFFFFFFFFULL) {
        throw std::invalid_argument("config: n exceeds 32-bit vertex range");
    }
    const double p_value = resolved_p();
    if (!(p_value >= 0.0 && p_value <= 1.0)) {
        throw std::invalid_argument("config: resolved p = " + std::to_string(p_value) + " is outside [0, 1]");
    }
    if (trials == 0) {
        throw std::invalid_argument("config: trials must be at least 1");
    }
    if (day_cap == 0) {
        throw std::invalid_argument("config: day_cap must be at least 1");
    }
    if (gamma && !(*gamma >= 0.0 && std::isfinite(*gamma))) {
        throw std::invalid_argument("config: gamma must be finite and non-negative");
    }
    if (const auto* fd = std::get_if<FixedDiscrepancy>(&model)) {
        const auto sn = static_cast<std::int64_t>(n);
        if (fd->d < -sn || fd->d > sn || ((sn + fd->d) & 1) != 0) {
            throw std::invalid_argument("config: discrepancy d = " + std::to_string(fd->d) +
                                        " must satisfy |d| <= n and d = n (mod 2)");
        }
    }
    if (const auto* me = std::get_if<MorningEvening>(&model)) {
        if (!(me->c >= 0.0 && std::isfinite(me->c))) {
            throw std::invalid_argument("config: c must be finite and non-negative");
        }
        if (swing_count(n, me->c) > n / 2) {
            throw std::invalid_argument("config: round(c sqrt(n)) exceeds floor(n/2)");
        }
        if (gamma && p_value == 0.0) {
            throw std::invalid_argument("config: census needs p > 0");
        }
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) { return derive_seed(master_seed, index); }

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{"n",     "p",     "trials",  "seed",     "model",   "d",
                                               "c",     "gamma", "day_cap", "quenched", "threads", "format"};
    return keys;
}

namespace {

std::string model_name(const OpinionModel& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UniformRandom>) {
                return "uniform";
            } else if constexpr (std::is_same_v<T, FixedDiscrepancy>) {
                return "fixed_discrepancy";
            } else {
                return "morning_evening";
            }
        },
        model);
}

ordered_json p_to_json(const PSpec& p) {
    if (p.value) {
        return *p.value;
    }
    return ordered_json{{"coefficient", p.coefficient}, {"exponent", p.exponent}, {"log_power", p.log_power}};
}

PSpec p_from_json(const json& value) {
    if (value.is_number()) {
        return PSpec::explicit_p(value.get<double>());
    }
    if (value.is_string()) {
        const auto text = value.get<std::string>();
        if (text == "upper") {
            return PSpec::upper();
        }
        if (text == "lower") {
            return PSpec::lower();
        }
        // Accept numbers passed as strings, e.g. "--set p=1e-3" from a shell.
        std::size_t used = 0;
        try {
            const double v = std::stod(text, &used);
            if (used == text.size()) {
                return PSpec::explicit_p(v);
            }
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("config: p must be a number, \"upper\", \"lower\" or a formula object");
    }
    if (value.is_object()) {
        PSpec p{std::nullopt, 1.0, 0.0, 0.0};
        for (const auto& [key, v] : value.items()) {
            if (!v.is_number()) {
                throw std::invalid_argument("config: p." + key + " must be a number");
            }
            if (key == "coefficient") {
                p.coefficient = v.get<double>();
            } else if (key == "exponent") {
                p.exponent = v.get<double>();
            } else if (key == "log_power") {
                p.log_power = v.get<double>();
            } else {
                throw std::invalid_argument("config: unknown key p." + key);
            }
        }
        return p;
    }
    throw std::invalid_argument("config: p has an unsupported type");
}

template <typename T>
T get_as(const json& value, const std::string& key) {
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (value.is_boolean()) {
                return value.get<bool>();
            }
            if (value.is_string()) {
                const auto s = value.get<std::string>();
                if (s == "true") {
                    return true;
                }
                if (s == "false") {
                    return false;
                }
            }
            throw std::invalid_argument("expected a boolean");
        } else if constexpr (std::is_integral_v<T>) {
            if (value.is_number_integer() || value.is_number_unsigned()) {
                if constexpr (std::is_unsigned_v<T>) {
                    if (value.is_number_integer() && value.get<std::int64_t>() < 0) {
                        throw std::invalid_argument("expected a non-negative integer");
                    }
                }
                return value.get<T>();
            }
            throw std::invalid_argument("expected an integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (value.is_number()) {
                return value.get<T>();
            }
            throw std::invalid_argument("expected a number");
        } else {
            if (value.is_string()) {
                return value.get<T>();
            }
            throw std::invalid_argument("expected a string");
        }
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("config: " + key + ": " + e.what());
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: " + key + ": " + e.what());
    }
}

}  // namespace

ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json out;
    out["n"] = cfg.n;
    out["p"] = p_to_json(cfg.p);
    out["trials"] = cfg.trials;
    out["seed"] = cfg.master_seed;
    out["model"] = model_name(cfg.model);
    if (const auto* fd = std::get_if<FixedDiscrepancy>(&cfg.model)) {
        out["d"] = fd->d;
    }
    if (const auto* me = std::get_if<MorningEvening>(&cfg.model)) {
        out["c"] = me->c;
    }
    if (cfg.gamma) {
        out["gamma"] = *cfg.gamma;
    }
    out["day_cap"] = cfg.day_cap;
    out["quenched"] = cfg.quenched;
    return out;
}

ExperimentConfig apply_config_json(ExperimentConfig cfg, const json& object) {
    if (!object.is_object()) {
        throw std::invalid_argument("config: expected a single key/value object");
    }
    const auto& keys = config_keys();
    std::optional<std::string> model;
    std::optional<std::int64_t> d;
    std::optional<double> c;
    for (const auto& [key, value] : object.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw std::invalid_argument("config: unknown key \"" + key + "\"");
        }
        if (key == "n") {
            cfg.n = get_as<std::size_t>(value, key);
        } else if (key == "p") {
            cfg.p = p_from_json(value);
        } else if (key == "trials") {
            cfg.trials = get_as<std::uint64_t>(value, key);
        } else if (key == "seed") {
            cfg.master_seed = get_as<std::uint64_t>(value, key);
        } else if (key == "model") {
            model = get_as<std::string>(value, key);
        } else if (key == "d") {
            d = get_as<std::int64_t>(value, key);
        } else if (key == "c") {
            c = get_as<double>(value, key);
        } else if (key == "gamma") {
            cfg.gamma = get_as<double>(value, key);
        } else if (key == "day_cap") {
            cfg.day_cap = get_as<std::uint32_t>(value, key);
        } else if (key == "quenched") {
            cfg.quenched = get_as<bool>(value, key);
        } else if (key == "threads") {
            cfg.threads = get_as<unsigned>(value, key);
        } else if (key == "format") {
            const auto f = get_as<std::string>(value, key);
            if (f == "csv") {
                cfg.format = ReportFormat::Csv;
            } else if (f == "json") {
                cfg.format = ReportFormat::Json;
            } else {
                throw std::invalid_argument("config: format must be csv or json");
            }
        }
    }

    const std::string kind = model.value_or(model_name(cfg.model));
    if (kind == "uniform") {
        if (d || c) {
            throw std::invalid_argument("config: d and c do not apply to the uniform model");
        }
        cfg.model = UniformRandom{};
    } else if (kind == "fixed_discrepancy") {
        if (c) {
            throw std::invalid_argument("config: c does not apply to the fixed_discrepancy model");
        }
        const auto* prev = std::get_if<FixedDiscrepancy>(&cfg.model);
        cfg.model = FixedDiscrepancy{d.value_or(prev ? prev->d : 0)};
    } else if (kind == "morning_evening") {
        if (d) {
            throw std::invalid_argument("config: d does not apply to the morning_evening model");
        }
        const auto* prev = std::get_if<MorningEvening>(&cfg.model);
        cfg.model = MorningEvening{c.value_or(prev ? prev->c : 1.0)};
    } else {
        throw std::invalid_argument("config: model must be uniform, fixed_discrepancy or morning_evening");
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open " + path.string());
    }
    json object;
    try {
        object = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + path.string() + ": " + e.what());
    }
    return apply_config_json(ExperimentConfig{}, object);
}

ExperimentConfig apply_overrides(ExperimentConfig base, const std::vector<std::string>& overrides) {
    json object = json::object();
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("override \"" + item + "\" must look like key=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded()) {
            value = text;
        }
        object[key] = value;
    }
    return apply_config_json(std::move(base), object);
}

}  // namespace majdyn
