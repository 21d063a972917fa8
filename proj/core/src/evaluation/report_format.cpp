#include "claimcheck/evaluation/report_format.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "claimcheck/error.hpp"

namespace claimcheck::evaluation {
namespace {

using nlohmann::ordered_json;

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json metrics_json(const Metrics& m) {
  return ordered_json{{"n", m.counts.total()},
                      {"accuracy", opt(m.accuracy)},
                      {"recall", opt(m.recall)},
                      {"precision", opt(m.precision)},
                      {"f1", opt(m.f1)},
                      {"tp", m.counts.tp},
                      {"fp", m.counts.fp},
                      {"fn", m.counts.fn},
                      {"tn", m.counts.tn}};
}

std::vector<std::string> metrics_row(const std::string& name, const Metrics& m) {
  return {name,
          std::to_string(m.counts.total()),
          format_ratio(m.accuracy),
          format_ratio(m.recall),
          format_ratio(m.precision),
          format_ratio(m.f1),
          std::to_string(m.counts.tp),
          std::to_string(m.counts.fp),
          std::to_string(m.counts.fn),
          std::to_string(m.counts.tn)};
}

std::string p_value_text(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return buf;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::table;
  if (name == "structured" || name == "json") return ReportFormat::structured;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

std::string format_ratio(const std::optional<double>& value) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *value);
  return buf;
}

std::string align_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string pad(widths[i] - row[i].size(), ' ');
      if (i) line += "  ";
      line += i == 0 ? row[i] + pad : pad + row[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

std::string format_report(const EvalReport& report, ReportFormat format) {
  if (format == ReportFormat::structured) {
    ordered_json doc{{"task", std::string(task_name(report.task))}, {"overall", metrics_json(report.overall)}};
    ordered_json langs = ordered_json::object();
    for (const auto& [lang, m] : report.per_language) langs[lang] = metrics_json(m);
    doc["per_language"] = langs;
    return doc.dump(2) + "\n";
  }
  std::vector<std::vector<std::string>> rows{
      {"language", "n", "accuracy", "recall", "precision", "f1", "tp", "fp", "fn", "tn"}};
  rows.push_back(metrics_row("all", report.overall));
  for (const auto& [lang, m] : report.per_language) rows.push_back(metrics_row(lang, m));
  return "task: " + std::string(task_name(report.task)) + "\n" + align_table(rows);
}

std::string format_report(const ComparisonTable& table, ReportFormat format) {
  if (format == ReportFormat::structured) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
      auto m = metrics_json(row.metrics);
      rows.push_back({{"model", row.model},
                      {"metrics", m},
                      {"best", {{"accuracy", row.best_accuracy}, {"recall", row.best_recall}, {"f1", row.best_f1}}}});
    }
    return ordered_json{{"task", std::string(task_name(table.task))}, {"models", rows}}.dump(2) + "\n";
  }
  auto mark = [](const std::optional<double>& v, bool best) { return format_ratio(v) + (best ? " *" : "  "); };
  std::vector<std::vector<std::string>> rows{{"model", "n", "accuracy", "recall", "f1"}};
  for (const auto& row : table.rows) {
    rows.push_back({row.model, std::to_string(row.metrics.counts.total()),
                    mark(row.metrics.accuracy, row.best_accuracy), mark(row.metrics.recall, row.best_recall),
                    mark(row.metrics.f1, row.best_f1)});
  }
  return "task: " + std::string(task_name(table.task)) + " (* = best in column)\n" + align_table(rows);
}

std::string format_report(const McNemarResult& r, ReportFormat format) {
  if (format == ReportFormat::structured) {
    return ordered_json{{"b", r.b},
                        {"c", r.c},
                        {"method", std::string(mcnemar_method_name(r.method))},
                        {"statistic", opt(r.statistic)},
                        {"p_value", r.p_value},
                        {"alpha", r.alpha},
                        {"null_rejected", r.null_rejected},
                        {"degenerate", r.degenerate}}
               .dump(2) +
           "\n";
  }
  std::vector<std::vector<std::string>> rows{
      {"b (A right, B wrong)", std::to_string(r.b)},
      {"c (A wrong, B right)", std::to_string(r.c)},
      {"method", std::string(mcnemar_method_name(r.method))},
      {"statistic", r.statistic ? p_value_text(*r.statistic) : "n/a"},
      {"p-value", p_value_text(r.p_value)},
      {"alpha", p_value_text(r.alpha)},
      {"null rejected", r.null_rejected ? "yes" : "no"},
  };
  if (r.degenerate) rows.push_back({"note", "no discordant pairs"});
  return align_table(rows);
}

std::string format_report(const LengthBinReport& report, ReportFormat format) {
  if (format == ReportFormat::structured) {
    ordered_json bins = ordered_json::array();
    for (const auto& b : report.bins) {
      bins.push_back({{"lower", b.lower},
                      {"upper", b.upper},
                      {"lower_inclusive", b.lower_inclusive},
                      {"total", b.total},
                      {"correct", b.correct},
                      {"recall", opt(b.recall)}});
    }
    return ordered_json{{"cut_points", report.cut_points},
                        {"bins", bins},
                        {"total", report.total},
                        {"correct", report.correct},
                        {"recall", report.overall_recall}}
               .dump(2) +
           "\n";
  }
  std::vector<std::vector<std::string>> rows{{"bin", "length", "total", "correct", "recall"}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& b = report.bins[i];
    const std::string range = std::string(b.lower_inclusive ? "[" : "(") + std::to_string(b.lower) + ", " +
                              std::to_string(b.upper) + "]";
    rows.push_back({"Q" + std::to_string(i + 1), range, std::to_string(b.total), std::to_string(b.correct),
                    format_ratio(b.recall)});
  }
  rows.push_back({"all", "", std::to_string(report.total), std::to_string(report.correct),
                  format_ratio(report.overall_recall)});
  return align_table(rows);
}

}  // namespace claimcheck::evaluation
