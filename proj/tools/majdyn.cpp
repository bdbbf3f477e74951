#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "majdyn/config.hpp"
#include "majdyn/graph.hpp"
#include "majdyn/harness.hpp"
#include "majdyn/lemma_suite.hpp"
#include "majdyn/report.hpp"
#include "majdyn/rng.hpp"
#include "majdyn/simd/kernels.hpp"

namespace {

using namespace majdyn;
using nlohmann::ordered_json;

// Thrown for bad input that only shows up after parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Shared {
    std::optional<std::string> config_path;
    std::vector<std::string> overrides;
    std::optional<std::size_t> n;
    std::optional<std::string> p;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    std::optional<std::int64_t> d;
    std::optional<double> c;
    std::optional<double> gamma;
    std::optional<std::uint32_t> day_cap;
    std::optional<unsigned> threads;
    bool quenched = false;
    std::optional<std::string> format;
    std::string output;
    int verbosity = 0;
};

void add_experiment_flags(CLI::App* cmd, Shared& s) {
    cmd->add_option("--config", s.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", s.overrides, "Config override key=value (repeatable)");
    cmd->add_option("--n", s.n, "Number of vertices");
    cmd->add_option("--p", s.p, "Edge probability: number, \"upper\" or \"lower\"");
    cmd->add_option("--trials", s.trials, "Number of trials");
    cmd->add_option("--seed", s.seed, "Master seed");
    cmd->add_option("--model", s.model, "Opinion model")
        ->check(CLI::IsMember({"uniform", "fixed_discrepancy", "morning_evening"}));
    auto* d = cmd->add_option("--d", s.d, "Initial discrepancy (fixed_discrepancy)");
    auto* c = cmd->add_option("--c", s.c, "Swing constant (morning_evening)");
    d->excludes(c);
    cmd->add_option("--gamma", s.gamma, "Almost-positive threshold");
    cmd->add_option("--day-cap", s.day_cap, "Maximum number of days");
    cmd->add_option("--threads", s.threads, "Worker threads, 0 = hardware");
    cmd->add_flag("--quenched", s.quenched, "Reuse one graph for all trials");
}

void add_output_flags(CLI::App* cmd, Shared& s) {
    cmd->add_option("-o,--output", s.output, "Output file (default: stdout)");
    cmd->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("-v,--verbose", s.verbosity, "Log progress to stderr");
}

std::string key_of(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw UsageError("override \"" + assignment + "\" is not key=value");
    }
    return assignment.substr(0, eq);
}

ExperimentConfig build_config(const Shared& s) {
    ExperimentConfig cfg;
    if (s.config_path) {
        cfg = load_config(*s.config_path);
    }
    std::map<std::string, std::string> set_keys;
    for (const auto& o : s.overrides) {
        set_keys.emplace(key_of(o), o);
    }

    std::vector<std::string> flags;
    auto flag = [&](const std::string& key, const std::string& value) {
        if (set_keys.count(key)) {
            throw UsageError("--" + key + " conflicts with --set " + set_keys.at(key));
        }
        flags.push_back(key + "=" + value);
    };
    auto quoted = [](const std::string& text) { return ordered_json(text).dump(); };
    if (s.n) flag("n", std::to_string(*s.n));
    if (s.p) flag("p", *s.p);
    if (s.trials) flag("trials", std::to_string(*s.trials));
    if (s.seed) flag("seed", std::to_string(*s.seed));
    if (s.model) {
        flag("model", quoted(*s.model));
    } else if (s.d && !set_keys.count("model")) {
        flag("model", quoted("fixed_discrepancy"));
    } else if (s.c && !set_keys.count("model")) {
        flag("model", quoted("morning_evening"));
    }
    if (s.d) flag("d", std::to_string(*s.d));
    if (s.c) flag("c", format_double(*s.c));
    if (s.gamma) flag("gamma", format_double(*s.gamma));
    if (s.day_cap) flag("day_cap", std::to_string(*s.day_cap));
    if (s.threads) flag("threads", std::to_string(*s.threads));
    if (s.quenched) flag("quenched", "true");
    if (s.format) flag("format", quoted(*s.format));

    cfg = apply_overrides(cfg, s.overrides);
    cfg = apply_overrides(cfg, flags);
    cfg.validate();
    return cfg;
}

void emit(const Shared& s, const std::string& text) {
    if (s.output.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(s.output, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + s.output + " for writing");
    }
    out << text;
    if (!out.flush()) {
        throw std::runtime_error("write failed for " + s.output);
    }
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

void log(const Shared& s, const std::string& line) {
    if (s.verbosity > 0) {
        std::cerr << "majdyn: " << line << '\n';
    }
}

int cmd_run(const Shared& s) {
    const ExperimentConfig cfg = build_config(s);
    log(s, "n=" + std::to_string(cfg.n) + " p=" + format_double(cfg.resolved_p()) +
               " trials=" + std::to_string(cfg.trials) + " simd=" + std::string(simd::to_string(simd::active_kernels().level)));
    const auto start = std::chrono::steady_clock::now();
    const ExperimentReport report = run_experiment(cfg);
    log(s, "finished in " +
               std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()) + " s");
    if (!s.output.empty()) {
        write_report(report, s.output, cfg.format);
    } else if (cfg.format == ReportFormat::Json) {
        emit(s, report_to_json(report).dump(2) + "\n");
    } else {
        emit(s, trials_csv(report));
    }
    return 0;
}

struct SweepArgs {
    std::vector<std::string> p_values;
    std::vector<std::int64_t> d_values;
};

int cmd_sweep(const Shared& s, const SweepArgs& a) {
    if (a.p_values.empty() && a.d_values.empty()) {
        throw UsageError("sweep needs --p-values or --d-values");
    }
    ExperimentConfig cfg = build_config(s);
    std::ostringstream csv;
    ordered_json rows = ordered_json::array();
    if (!a.d_values.empty()) {
        if (!std::holds_alternative<FixedDiscrepancy>(cfg.model)) {
            cfg.model = FixedDiscrepancy{a.d_values.front()};
        }
        csv << "d,trials,unanimity_fraction,agreement_fraction,plus_fraction,minus_fraction,median_unanimity_day\n";
        for (const auto& r : bias_sweep(cfg, a.d_values)) {
            csv << r.d << ',' << r.trials << ',' << format_double(r.unanimity_fraction) << ','
                << format_double(r.agreement_fraction) << ',' << format_double(r.plus_fraction) << ','
                << format_double(r.minus_fraction) << ',' << opt(r.median_unanimity_day) << '\n';
            rows.push_back({{"d", r.d},
                            {"trials", r.trials},
                            {"unanimity_fraction", r.unanimity_fraction},
                            {"agreement_fraction", r.agreement_fraction},
                            {"plus_fraction", r.plus_fraction},
                            {"minus_fraction", r.minus_fraction},
                            {"median_unanimity_day", opt_json(r.median_unanimity_day)}});
        }
    } else {
        std::vector<ExperimentConfig> grid;
        for (const auto& p : a.p_values) {
            grid.push_back(apply_overrides(cfg, {"p=" + p}));
            grid.back().validate();
        }
        csv << "p,trials,unanimity_fraction,median_unanimity_day,unanimous_by_day6_fraction,sign_match_fraction\n";
        for (const auto& point : grid) {
            log(s, "p=" + format_double(point.resolved_p()));
            const Aggregates agg = run_experiment(point).aggregates;
            csv << format_double(point.resolved_p()) << ',' << agg.trials << ',' << format_double(agg.unanimity_fraction)
                << ',' << opt(agg.median_unanimity_day) << ',' << format_double(agg.unanimous_by_day6_fraction) << ','
                << opt(agg.sign_match_fraction) << '\n';
            rows.push_back({{"p", point.resolved_p()},
                            {"trials", agg.trials},
                            {"unanimity_fraction", agg.unanimity_fraction},
                            {"median_unanimity_day", opt_json(agg.median_unanimity_day)},
                            {"unanimous_by_day6_fraction", agg.unanimous_by_day6_fraction},
                            {"sign_match_fraction", opt_json(agg.sign_match_fraction)}});
        }
    }
    emit(s, cfg.format == ReportFormat::Json ? rows.dump(2) + "\n" : csv.str());
    return 0;
}

int cmd_census(const Shared& s) {
    const ExperimentConfig cfg = build_config(s);
    const ExcessSummary e = census_experiment(cfg);
    if (cfg.format == ReportFormat::Json) {
        auto q = [](const Quantiles& x) {
            return ordered_json{{"min", x.min},       {"q10", x.q10}, {"q25", x.q25}, {"median", x.median},
                                {"q75", x.q75},       {"q90", x.q90}, {"max", x.max}};
        };
        emit(s, ordered_json{{"trials", e.trials},
                             {"positive", e.positive},
                             {"positive_fraction", e.positive_fraction},
                             {"alpha", q(e.alpha)},
                             {"excess", q(e.excess)}}
                        .dump(2) +
                    "\n");
        return 0;
    }
    std::ostringstream csv;
    csv << "statistic,min,q10,q25,median,q75,q90,max\n";
    for (const auto& [name, x] : {std::pair{"alpha", e.alpha}, std::pair{"excess", e.excess}}) {
        csv << name << ',' << format_double(x.min) << ',' << format_double(x.q10) << ',' << format_double(x.q25) << ','
            << format_double(x.median) << ',' << format_double(x.q75) << ',' << format_double(x.q90) << ','
            << format_double(x.max) << '\n';
    }
    csv << "positive_fraction," << format_double(e.positive_fraction) << ",,,,,,\n";
    emit(s, csv.str());
    return 0;
}

int cmd_growth(const Shared& s, std::uint32_t days) {
    const ExperimentConfig cfg = build_config(s);
    const GrowthTable t = growth_ratio_experiment(cfg, days);
    std::ostringstream csv;
    csv << "day,samples,skipped,median_ratio,sqrt_np,normalized_ratio\n";
    ordered_json rows = ordered_json::array();
    for (const auto& col : t.columns) {
        std::optional<double> norm;
        if (col.median_ratio && t.sqrt_np > 0) {
            norm = *col.median_ratio / t.sqrt_np;
        }
        csv << col.day << ',' << col.samples << ',' << col.skipped << ',' << opt(col.median_ratio) << ','
            << format_double(t.sqrt_np) << ',' << opt(norm) << '\n';
        rows.push_back({{"day", col.day},
                        {"samples", col.samples},
                        {"skipped", col.skipped},
                        {"median_ratio", opt_json(col.median_ratio)},
                        {"sqrt_np", t.sqrt_np},
                        {"normalized_ratio", opt_json(norm)}});
    }
    emit(s, cfg.format == ReportFormat::Json ? rows.dump(2) + "\n" : csv.str());
    return 0;
}

struct ContractionArgs {
    std::optional<std::int64_t> floor;
    double delta = 0.9;
    std::uint64_t pairs = 2000;
};

int cmd_contraction(const Shared& s, const ContractionArgs& a) {
    const ExperimentConfig cfg = build_config(s);
    std::int64_t floor = 0;
    if (a.floor) {
        floor = *a.floor;
    } else {
        const double p = cfg.resolved_p();
        const Graph g = sample_gnp(cfg.n, p, derive_seed(cfg.master_seed, 0x6A));
        const auto est = estimate_jumbledness(g, p, a.pairs, {1, std::max<std::size_t>(1, cfg.n / 2)},
                                              derive_seed(cfg.master_seed, 0x6B));
        floor = contraction_floor(est.beta_hat, p, a.delta);
        log(s, "beta_hat=" + format_double(est.beta_hat) + " floor=" + std::to_string(floor));
    }
    const ContractionTable t = contraction_experiment(cfg, floor, a.delta);
    std::ostringstream csv;
    csv << "trial,qualifies,crossing_day,next_day_sum_share,jump_ok,decay_monotone,minority_counts\n";
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows) {
        std::string counts;
        for (std::size_t i = 0; i < r.minority_counts.size(); ++i) {
            counts += (i ? ";" : "") + std::to_string(r.minority_counts[i]);
        }
        csv << r.trial << ',' << (r.qualifies ? 1 : 0) << ',' << r.crossing_day << ','
            << format_double(r.next_day_sum_share) << ',' << (r.jump_ok ? 1 : 0) << ',' << (r.decay_monotone ? 1 : 0)
            << ',' << counts << '\n';
        rows.push_back({{"trial", r.trial},
                        {"qualifies", r.qualifies},
                        {"crossing_day", r.crossing_day},
                        {"next_day_sum_share", r.next_day_sum_share},
                        {"jump_ok", r.jump_ok},
                        {"decay_monotone", r.decay_monotone},
                        {"minority_counts", r.minority_counts}});
    }
    if (cfg.format == ReportFormat::Json) {
        emit(s, ordered_json{{"bias_floor", t.bias_floor},
                             {"delta", t.delta},
                             {"qualifying", t.qualifying},
                             {"jump_fraction", t.jump_fraction},
                             {"decay_fraction", t.decay_fraction},
                             {"rows", rows}}
                        .dump(2) +
                    "\n");
    } else {
        emit(s, csv.str());
    }
    log(s, "qualifying=" + std::to_string(t.qualifying) + " jump_fraction=" + format_double(t.jump_fraction) +
               " decay_fraction=" + format_double(t.decay_fraction));
    return 0;
}

int cmd_verify(const Shared& s, std::uint64_t max_trials, std::uint64_t seed) {
    if (max_trials == 0) {
        throw UsageError("--max-trials must be positive");
    }
    const auto rows = probkit::run_lemma_suite(max_trials, seed);
    bool all = true;
    std::ostringstream out;
    if (s.format && *s.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) {
            all = all && r.pass;
            arr.push_back({{"check", r.name},
                           {"cases", r.cases},
                           {"worst", r.worst},
                           {"limit", r.limit},
                           {"result", std::string(r.pass ? "PASS" : "FAIL")},
                           {"detail", r.detail}});
        }
        out << arr.dump(2) << '\n';
    } else {
        out << "check,cases,worst,limit,result,detail\n";
        for (const auto& r : rows) {
            all = all && r.pass;
            out << r.name << ',' << r.cases << ',' << format_double(r.worst) << ',' << format_double(r.limit) << ','
                << (r.pass ? "PASS" : "FAIL") << ',' << csv_field(r.detail) << '\n';
        }
    }
    emit(s, out.str());
    if (!all) {
        std::cerr << "majdyn: lemma verification failed\n";
        return 2;
    }
    return 0;
}

struct GenArgs {
    std::size_t n = 1000;
    std::string p = "0.01";
    std::uint64_t seed = 0;
    std::string graph_out;
};

int cmd_gen(const GenArgs& a) {
    ExperimentConfig cfg = apply_overrides(ExperimentConfig{}, {"n=" + std::to_string(a.n), "p=" + a.p});
    cfg.validate();
    const double p = cfg.resolved_p();
    const Graph g = sample_gnp(a.n, p, a.seed);
    if (!a.graph_out.empty()) {
        save_graph(g, a.graph_out);
    }
    const DegreeStats d = degree_stats(g);
    std::cout << "n,p,seed,edge_count,min_degree,max_degree,mean_degree\n"
              << a.n << ',' << format_double(p) << ',' << a.seed << ',' << g.edge_count() << ',' << d.min << ','
              << d.max << ',' << format_double(d.mean) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Majority dynamics on G(n, p): experiments and probability checks", "majdyn"};
    app.require_subcommand(1);
    app.fallthrough(false);

    Shared s;
    auto* run = app.add_subcommand("run", "Run trials and write the per-trial report");
    add_experiment_flags(run, s);
    add_output_flags(run, s);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Unanimity statistics over a p grid or a discrepancy grid");
    add_experiment_flags(sweep, s);
    add_output_flags(sweep, s);
    auto* pv = sweep->add_option("--p-values", sweep_args.p_values, "Edge probabilities to sweep")->delimiter(',');
    auto* dv = sweep->add_option("--d-values", sweep_args.d_values, "Initial discrepancies to sweep")->delimiter(',');
    pv->excludes(dv);

    auto* census = app.add_subcommand("census", "Almost-positive excess under the morning/evening model");
    add_experiment_flags(census, s);
    add_output_flags(census, s);

    std::uint32_t days = kGrowthDays;
    auto* growth = app.add_subcommand("growth", "Median bias growth ratios per day");
    add_experiment_flags(growth, s);
    add_output_flags(growth, s);
    growth->add_option("--days", days, "Days to track")->check(CLI::Range(1, 64));

    ContractionArgs con;
    auto* contraction = app.add_subcommand("contraction", "Minority decay once the bias passes a floor");
    add_experiment_flags(contraction, s);
    add_output_flags(contraction, s);
    contraction->add_option("--floor", con.floor, "Bias floor (default: from a sampled jumbledness estimate, which understates the worst case)");
    contraction->add_option("--delta", con.delta, "Minimum degree fraction")->check(CLI::Range(0.0, 1.0));
    contraction->add_option("--pairs", con.pairs, "Subset pairs for the jumbledness estimate");

    std::uint64_t max_trials = 200;
    std::uint64_t lemma_seed = 1;
    auto* verify = app.add_subcommand("verify-lemmas", "Run the probability toolkit checks");
    add_output_flags(verify, s);
    verify->add_option("--max-trials", max_trials, "Random cases per check");
    verify->add_option("--seed", lemma_seed, "Seed for the random cases");

    GenArgs gen;
    auto* gen_graph = app.add_subcommand("gen-graph", "Sample G(n, p), print degree summary, optionally save it");
    gen_graph->add_option("--n", gen.n, "Number of vertices");
    gen_graph->add_option("--p", gen.p, "Edge probability: number, \"upper\" or \"lower\"");
    gen_graph->add_option("--seed", gen.seed, "Seed");
    gen_graph->add_option("-o,--output", gen.graph_out, "Binary graph file");

    if (argc <= 1) {
        std::cerr << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "majdyn: error: " << e.what() << '\n';
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        std::cerr << sub->help();
        return 1;
    }

    try {
        if (*run) return cmd_run(s);
        if (*sweep) return cmd_sweep(s, sweep_args);
        if (*census) return cmd_census(s);
        if (*growth) return cmd_growth(s, days);
        if (*contraction) return cmd_contraction(s, con);
        if (*verify) return cmd_verify(s, max_trials, lemma_seed);
        if (*gen_graph) return cmd_gen(gen);
    } catch (const std::invalid_argument& e) {
        std::cerr << "majdyn: error: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "majdyn: error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "majdyn: failure: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
