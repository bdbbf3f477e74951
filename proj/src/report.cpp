#include "majdyn/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace majdyn {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
ordered_json optional_json(const std::optional<T>& value) {
    return value ? ordered_json(*value) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& value) {
    if (value.is_null()) {
        return std::nullopt;
    }
    return value.get<T>();
}

Outcome outcome_from(const std::string& name) {
    for (Outcome o : {Outcome::Unanimous, Outcome::PeriodTwo, Outcome::DayCapReached}) {
        if (name == to_string(o)) {
            return o;
        }
    }
    throw std::invalid_argument("report: unknown outcome \"" + name + "\"");
}

ordered_json quantiles_json(const Quantiles& q) {
    return ordered_json{{"min", q.min},       {"q10", q.q10}, {"q25", q.q25}, {"median", q.median},
                        {"q75", q.q75},       {"q90", q.q90}, {"max", q.max}};
}

Quantiles quantiles_from(const json& j) {
    Quantiles q;
    q.min = j.at("min").get<double>();
    q.q10 = j.at("q10").get<double>();
    q.q25 = j.at("q25").get<double>();
    q.median = j.at("median").get<double>();
    q.q75 = j.at("q75").get<double>();
    q.q90 = j.at("q90").get<double>();
    q.max = j.at("max").get<double>();
    return q;
}

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

template <typename T>
std::string num(T v) {
    return std::to_string(v);
}

}  // namespace

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(text);
    }
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') {
            out += "\"\"";
        } else {
            out += ch;
        }
    }
    out += '"';
    return out;
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, end);
}

std::string trials_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "trial,seed,edge_count,initial_bias,outcome,outcome_day,period,final_sign,unanimity_day,biases,"
          "almost_positive,unstable,unstable_with_swing,excess,alpha,swing_count,day2_bias,error\n";
    for (const auto& row : report.trials) {
        std::string biases;
        for (std::size_t i = 0; i < row.biases.size(); ++i) {
            biases += (i ? ";" : "") + num(row.biases[i]);
        }
        const bool ok = row.error.empty();
        os << row.index << ',' << row.seed << ',' << (ok ? num(row.edge_count) : "") << ','
           << (ok && !row.biases.empty() ? num(row.biases[0]) : "") << ','
           << (ok ? std::string(to_string(row.outcome)) : "") << ',' << (ok ? num(row.outcome_day) : "") << ','
           << (ok ? num(row.period) : "") << ',' << (ok ? num(row.final_sign) : "") << ','
           << (row.unanimity_day() && ok ? num(*row.unanimity_day()) : "") << ',' << csv_field(biases) << ',';
        if (row.census) {
            const auto& c = *row.census;
            os << c.almost_positive << ',' << c.unstable << ',' << c.unstable_with_swing << ',' << c.excess << ','
               << format_double(c.alpha) << ',' << c.swing_count << ',' << c.day2_bias << ',';
        } else {
            os << ",,,,,,,";
        }
        os << csv_field(row.error) << '\n';
    }
    return os.str();
}

std::string aggregates_csv(const ExperimentReport& report) {
    const Aggregates& a = report.aggregates;
    std::ostringstream os;
    os << "key,value\n";
    os << "schema_version," << kReportSchemaVersion << '\n';
    os << "resolved_p," << format_double(report.resolved_p) << '\n';
    os << "trials," << a.trials << '\n';
    os << "failed," << a.failed << '\n';
    os << "unanimous," << a.unanimous << '\n';
    os << "unanimity_fraction," << format_double(a.unanimity_fraction) << '\n';
    os << "median_unanimity_day," << opt_text(a.median_unanimity_day) << '\n';
    os << "unanimous_by_day6_fraction," << format_double(a.unanimous_by_day6_fraction) << '\n';
    os << "sign_checked," << a.sign_checked << '\n';
    os << "sign_matches," << a.sign_matches << '\n';
    os << "sign_match_fraction," << opt_text(a.sign_match_fraction) << '\n';
    for (const auto& g : a.growth) {
        const std::string prefix = "growth_day" + num(g.day) + "_";
        os << prefix << "median_ratio," << opt_text(g.median_ratio) << '\n';
        os << prefix << "samples," << g.samples << '\n';
        os << prefix << "skipped," << g.skipped << '\n';
    }
    if (a.excess) {
        const auto& e = *a.excess;
        os << "excess_trials," << e.trials << '\n';
        os << "excess_positive," << e.positive << '\n';
        os << "excess_positive_fraction," << format_double(e.positive_fraction) << '\n';
        const std::pair<const char*, const Quantiles*> groups[] = {{"alpha", &e.alpha}, {"excess", &e.excess}};
        for (const auto& [name, q] : groups) {
            os << name << "_min," << format_double(q->min) << '\n';
            os << name << "_q10," << format_double(q->q10) << '\n';
            os << name << "_q25," << format_double(q->q25) << '\n';
            os << name << "_median," << format_double(q->median) << '\n';
            os << name << "_q75," << format_double(q->q75) << '\n';
            os << name << "_q90," << format_double(q->q90) << '\n';
            os << name << "_max," << format_double(q->max) << '\n';
        }
    }
    return os.str();
}

ordered_json report_to_json(const ExperimentReport& report) {
    ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["config"] = config_to_json(report.config);
    doc["resolved_p"] = report.resolved_p;
    ordered_json trials = ordered_json::array();
    for (const auto& row : report.trials) {
        ordered_json t;
        t["trial"] = row.index;
        t["seed"] = row.seed;
        if (!row.error.empty()) {
            t["error"] = row.error;
            trials.push_back(std::move(t));
            continue;
        }
        t["edge_count"] = row.edge_count;
        t["outcome"] = to_string(row.outcome);
        t["outcome_day"] = row.outcome_day;
        t["period"] = row.period;
        t["final_sign"] = row.final_sign;
        t["unanimity_day"] = optional_json(row.unanimity_day());
        t["biases"] = row.biases;
        if (row.census) {
            const auto& c = *row.census;
            t["census"] = ordered_json{{"almost_positive", c.almost_positive},
                                       {"unstable", c.unstable},
                                       {"unstable_with_swing", c.unstable_with_swing},
                                       {"excess", c.excess},
                                       {"alpha", c.alpha},
                                       {"swing_count", c.swing_count},
                                       {"day2_bias", c.day2_bias}};
        }
        trials.push_back(std::move(t));
    }
    doc["trials"] = std::move(trials);

    const Aggregates& a = report.aggregates;
    ordered_json agg;
    agg["trials"] = a.trials;
    agg["failed"] = a.failed;
    agg["unanimous"] = a.unanimous;
    agg["unanimity_fraction"] = a.unanimity_fraction;
    agg["median_unanimity_day"] = optional_json(a.median_unanimity_day);
    agg["unanimous_by_day6_fraction"] = a.unanimous_by_day6_fraction;
    agg["sign_checked"] = a.sign_checked;
    agg["sign_matches"] = a.sign_matches;
    agg["sign_match_fraction"] = optional_json(a.sign_match_fraction);
    ordered_json growth = ordered_json::array();
    for (const auto& g : a.growth) {
        growth.push_back(ordered_json{{"day", g.day},
                                      {"samples", g.samples},
                                      {"skipped", g.skipped},
                                      {"median_ratio", optional_json(g.median_ratio)}});
    }
    agg["growth"] = std::move(growth);
    if (a.excess) {
        const auto& e = *a.excess;
        agg["excess"] = ordered_json{{"trials", e.trials},
                                     {"positive", e.positive},
                                     {"positive_fraction", e.positive_fraction},
                                     {"alpha", quantiles_json(e.alpha)},
                                     {"excess", quantiles_json(e.excess)}};
    } else {
        agg["excess"] = nullptr;
    }
    doc["aggregates"] = std::move(agg);
    return doc;
}

ExperimentReport report_from_json(const json& doc) {
    if (doc.at("schema_version").get<int>() != kReportSchemaVersion) {
        throw std::invalid_argument("report: unsupported schema version");
    }
    ExperimentReport report;
    report.config = apply_config_json(ExperimentConfig{}, doc.at("config"));
    report.resolved_p = doc.at("resolved_p").get<double>();
    for (const auto& t : doc.at("trials")) {
        TrialRow row;
        row.index = t.at("trial").get<std::uint64_t>();
        row.seed = t.at("seed").get<std::uint64_t>();
        if (t.contains("error")) {
            row.error = t.at("error").get<std::string>();
            report.trials.push_back(std::move(row));
            continue;
        }
        row.edge_count = t.at("edge_count").get<std::uint64_t>();
        row.outcome = outcome_from(t.at("outcome").get<std::string>());
        row.outcome_day = t.at("outcome_day").get<std::uint32_t>();
        row.period = t.at("period").get<std::uint32_t>();
        row.final_sign = t.at("final_sign").get<int>();
        row.biases = t.at("biases").get<std::vector<std::int64_t>>();
        if (t.contains("census")) {
            const auto& c = t.at("census");
            TrialCensus tc;
            tc.almost_positive = c.at("almost_positive").get<std::uint64_t>();
            tc.unstable = c.at("unstable").get<std::uint64_t>();
            tc.unstable_with_swing = c.at("unstable_with_swing").get<std::uint64_t>();
            tc.excess = c.at("excess").get<std::int64_t>();
            tc.alpha = c.at("alpha").get<double>();
            tc.swing_count = c.at("swing_count").get<std::uint64_t>();
            tc.day2_bias = c.at("day2_bias").get<std::int64_t>();
            row.census = tc;
        }
        report.trials.push_back(std::move(row));
    }

    const auto& agg = doc.at("aggregates");
    Aggregates& a = report.aggregates;
    a.trials = agg.at("trials").get<std::uint64_t>();
    a.failed = agg.at("failed").get<std::uint64_t>();
    a.unanimous = agg.at("unanimous").get<std::uint64_t>();
    a.unanimity_fraction = agg.at("unanimity_fraction").get<double>();
    a.median_unanimity_day = optional_from<double>(agg.at("median_unanimity_day"));
    a.unanimous_by_day6_fraction = agg.at("unanimous_by_day6_fraction").get<double>();
    a.sign_checked = agg.at("sign_checked").get<std::uint64_t>();
    a.sign_matches = agg.at("sign_matches").get<std::uint64_t>();
    a.sign_match_fraction = optional_from<double>(agg.at("sign_match_fraction"));
    for (const auto& g : agg.at("growth")) {
        GrowthColumn col;
        col.day = g.at("day").get<std::uint32_t>();
        col.samples = g.at("samples").get<std::uint64_t>();
        col.skipped = g.at("skipped").get<std::uint64_t>();
        col.median_ratio = optional_from<double>(g.at("median_ratio"));
        a.growth.push_back(col);
    }
    if (!agg.at("excess").is_null()) {
        const auto& e = agg.at("excess");
        ExcessSummary ex;
        ex.trials = e.at("trials").get<std::uint64_t>();
        ex.positive = e.at("positive").get<std::uint64_t>();
        ex.positive_fraction = e.at("positive_fraction").get<double>();
        ex.alpha = quantiles_from(e.at("alpha"));
        ex.excess = quantiles_from(e.at("excess"));
        a.excess = ex;
    }
    return report;
}

std::filesystem::path aggregates_path(const std::filesystem::path& path) {
    std::filesystem::path out = path;
    out.replace_extension();
    out += ".aggregates.csv";
    return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

}  // namespace

void write_report(const ExperimentReport& report, const std::filesystem::path& path, ReportFormat format) {
    if (format == ReportFormat::Json) {
        write_text(path, report_to_json(report).dump(2) + "\n");
        return;
    }
    write_text(path, trials_csv(report));
    write_text(aggregates_path(path), aggregates_csv(report));
}

}  // namespace majdyn
