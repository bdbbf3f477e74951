#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "majdyn/harness.hpp"
#include "majdyn/report.hpp"

using namespace majdyn;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("majdyn_test_" + name);
}

ExperimentConfig golden_config() {
    ExperimentConfig cfg;
    cfg.n = 100;
    cfg.p = PSpec::explicit_p(0.1);
    cfg.trials = 3;
    cfg.master_seed = 42;
    return cfg;
}

}  // namespace

TEST(Csv, FieldQuoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(csv_field(""), "");
}

TEST(Csv, DoubleFormatting) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(std::stod(format_double(2.0 / 7.0)), 2.0 / 7.0);
}

TEST(Report, EmptyTrialList) {
    ExperimentReport report;
    report.config = golden_config();
    report.resolved_p = 0.1;
    report.aggregates = aggregate({});
    const auto csv = trials_csv(report);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
    auto doc = report_to_json(report);
    EXPECT_TRUE(doc["trials"].is_array());
    EXPECT_TRUE(doc["trials"].empty());
    auto parsed = nlohmann::json::parse(doc.dump());
    EXPECT_EQ(report_to_json(report_from_json(parsed)).dump(), doc.dump());
}

TEST(Report, JsonRoundTrip) {
    auto cfg = golden_config();
    cfg.trials = 6;
    cfg.model = MorningEvening{1.0};
    cfg.gamma = 0.3;
    auto report = run_experiment(cfg);
    auto doc = report_to_json(report);
    auto back = report_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(back.config, report.config);
    ASSERT_EQ(back.trials.size(), report.trials.size());
    for (std::size_t i = 0; i < back.trials.size(); ++i) {
        EXPECT_EQ(back.trials[i].biases, report.trials[i].biases);
        EXPECT_EQ(back.trials[i].census->excess, report.trials[i].census->excess);
        EXPECT_DOUBLE_EQ(back.trials[i].census->alpha, report.trials[i].census->alpha);
    }
    EXPECT_EQ(report_to_json(back).dump(), doc.dump());
    EXPECT_EQ(trials_csv(back), trials_csv(report));
    EXPECT_EQ(aggregates_csv(back), aggregates_csv(report));
}

TEST(Report, FailedTrialRoundTrip) {
    ExperimentReport report;
    report.config = golden_config();
    report.resolved_p = 0.1;
    TrialRow row;
    row.index = 0;
    row.seed = 5;
    row.error = "bad, \"thing\"";
    report.trials.push_back(row);
    report.aggregates = aggregate(report.trials);
    EXPECT_EQ(report.aggregates.failed, 1u);
    auto csv = trials_csv(report);
    EXPECT_NE(csv.find("\"bad, \"\"thing\"\"\""), std::string::npos);
    auto back = report_from_json(nlohmann::json::parse(report_to_json(report).dump()));
    EXPECT_EQ(back.trials[0].error, row.error);
}

TEST(Report, RejectsUnknownSchema) {
    ExperimentReport report;
    report.config = golden_config();
    auto doc = nlohmann::json::parse(report_to_json(report).dump());
    doc["schema_version"] = 99;
    EXPECT_THROW(report_from_json(doc), std::invalid_argument);
}

TEST(Report, AggregatesPath) {
    EXPECT_EQ(aggregates_path("out.csv"), std::filesystem::path("out.aggregates.csv"));
    EXPECT_EQ(aggregates_path("dir/run"), std::filesystem::path("dir/run.aggregates.csv"));
}

TEST(Report, GoldenFiles) {
    auto report = run_experiment(golden_config());
    const std::filesystem::path golden = MAJDYN_GOLDEN_DIR;

    auto json_path = temp_file("golden.json");
    write_report(report, json_path, ReportFormat::Json);
    EXPECT_EQ(slurp(json_path), slurp(golden / "run_n100_p0.1_seed42.json"));

    auto csv_path = temp_file("golden.csv");
    write_report(report, csv_path, ReportFormat::Csv);
    EXPECT_EQ(slurp(csv_path), slurp(golden / "run_n100_p0.1_seed42.csv"));
    EXPECT_EQ(slurp(aggregates_path(csv_path)), slurp(golden / "run_n100_p0.1_seed42.aggregates.csv"));
    for (const auto& p : {json_path, csv_path, aggregates_path(csv_path)}) std::filesystem::remove(p);
}

TEST(Report, WriteFailureNamesPath) {
    ExperimentReport report;
    try {
        write_report(report, "/nonexistent-dir/x.json", ReportFormat::Json);
        FAIL() << "expected a throw";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.json"), std::string::npos);
    }
}
