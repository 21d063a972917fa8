#pragma once

#include <string>
#include <string_view>

#include "claimcheck/evaluation/length_analysis.hpp"
#include "claimcheck/evaluation/mcnemar.hpp"
#include "claimcheck/evaluation/metrics.hpp"

namespace claimcheck::evaluation {

// Human-readable aligned tables (ratios to 4 decimals, "n/a" for undefined)
// and structured JSON (full precision, null for undefined). Schemas are in
// docs/report-formats.md.
enum class ReportFormat { table, structured };

ReportFormat parse_report_format(std::string_view name);

std::string format_report(const EvalReport& report, ReportFormat format);
std::string format_report(const ComparisonTable& table, ReportFormat format);
std::string format_report(const McNemarResult& result, ReportFormat format);
std::string format_report(const LengthBinReport& report, ReportFormat format);

// Left-aligns the first column and right-aligns the rest.
std::string align_table(const std::vector<std::vector<std::string>>& rows);
std::string format_ratio(const std::optional<double>& value);

}  // namespace claimcheck::evaluation
