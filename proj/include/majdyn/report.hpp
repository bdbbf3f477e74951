#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "majdyn/config.hpp"
#include "majdyn/harness.hpp"

namespace majdyn {

inline constexpr int kReportSchemaVersion = 1;

/// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

/// Shortest round-trip decimal form.
std::string format_double(double value);

/// Header plus one row per trial, '\n' line endings.
std::string trials_csv(const ExperimentReport& report);

/// "key,value" rows of the aggregates.
std::string aggregates_csv(const ExperimentReport& report);

nlohmann::ordered_json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& document);

/// Companion file holding the aggregates of a CSV report:
/// "out.csv" -> "out.aggregates.csv".
std::filesystem::path aggregates_path(const std::filesystem::path& path);

/// CSV writes the trial table to `path` and the aggregates next to it; JSON
/// writes one document. Output is byte-stable for identical reports.
/// Throws std::runtime_error naming the path on I/O failure.
void write_report(const ExperimentReport& report, const std::filesystem::path& path, ReportFormat format);

}  // namespace majdyn
