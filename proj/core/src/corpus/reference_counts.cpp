#include "claimcheck/corpus/reference_counts.hpp"

#include <map>

#include <json.hpp>

#include "claimcheck/error.hpp"
#include "claimcheck/io.hpp"

namespace claimcheck::corpus {

std::pair<std::size_t, std::size_t> CountExpectation::expected_totals() const {
  if (totals) return *totals;
  std::pair<std::size_t, std::size_t> sum{0, 0};
  for (const auto& row : per_language) {
    sum.first += row.positive;
    sum.second += row.negative;
  }
  return sum;
}

CountExpectation CountExpectation::preset(std::string_view name) {
  CountExpectation e;
  e.name = std::string(name);
  if (name == "clef2022-1b-all") {
    e.task = Task::vfc;
    e.per_language = {{"en", 3040, 1753}, {"tr", 2480, 1331}, {"nl", 1861, 2162},
                      {"ar", 4121, 2093}, {"bg", 2697, 1329}};
    e.totals = {{14199, 8668}};
  } else if (name == "clef2022-1b-test") {
    e.task = Task::vfc;
    e.fold = Fold::test;
    e.per_language = {{"en", 149, 102}, {"nl", 608, 750}, {"tr", 303, 209},
                      {"ar", 682, 566}, {"bg", 130, 199}};
    e.totals = {{1872, 1826}};
  } else if (name == "clef2022-1c-test") {
    e.task = Task::harmful;
    e.fold = Fold::test;
    e.per_language = {{"en", 40, 211}, {"nl", 215, 1145}, {"tr", 46, 466},
                      {"ar", 190, 1011}, {"bg", 11, 314}};
    e.totals = {{502, 3147}};
  } else {
    throw ConfigError("unknown count preset '" + std::string(name) + "'");
  }
  return e;
}

std::vector<std::string> CountExpectation::preset_names() {
  return {"clef2022-1b-all", "clef2022-1b-test", "clef2022-1c-test"};
}

CountExpectation CountExpectation::parse(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
    CountExpectation e;
    e.name = doc.value("name", std::string("custom"));
    e.task = parse_task(doc.at("task").get<std::string>());
    if (doc.contains("fold") && !doc.at("fold").is_null()) e.fold = parse_fold(doc.at("fold").get<std::string>());
    const json languages = doc.value("languages", json::object());
    for (const auto& [lang, counts] : languages.items()) {
      e.per_language.push_back({lang, counts.at(0).get<std::size_t>(), counts.at(1).get<std::size_t>()});
    }
    if (doc.contains("totals")) {
      const auto& t = doc.at("totals");
      e.totals = {{t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>()}};
    }
    return e;
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("count expectation: ") + ex.what());
  }
}

CountExpectation CountExpectation::load(const std::filesystem::path& path) {
  return parse(io::read_file(path));
}

VerificationReport verify_reference_counts(const Collection& collection, const CountExpectation& expected) {
  if (expected.fold && collection.split_assignment.empty()) {
    throw ConfigError("expectation '" + expected.name + "' needs the " +
                      std::string(fold_name(*expected.fold)) + " fold but the collection has no split");
  }
  std::map<std::string, std::pair<std::size_t, std::size_t>> actual;
  for (const auto& post : collection.posts) {
    if (expected.fold) {
      auto it = collection.split_assignment.find(post.id);
      if (it == collection.split_assignment.end() || it->second != *expected.fold) continue;
    }
    const auto& label = post.labels.get(expected.task);
    if (!label) continue;
    auto& counts = actual[post.language];
    (*label ? counts.first : counts.second) += 1;
  }

  VerificationReport report;
  report.name = expected.name;
  report.task = expected.task;
  report.fold = expected.fold;

  std::map<std::string, CountRow> rows;
  for (const auto& lc : expected.per_language) {
    auto& row = rows[lc.language];
    row.language = lc.language;
    row.expected_positive = lc.positive;
    row.expected_negative = lc.negative;
  }
  for (const auto& [lang, counts] : actual) {
    auto& row = rows[lang];
    row.language = lang;
    row.actual_positive = counts.first;
    row.actual_negative = counts.second;
  }
  bool all_rows = true;
  for (auto& [lang, row] : rows) {
    if (row.expected_positive) {
      row.pass = row.actual_positive == *row.expected_positive && row.actual_negative == *row.expected_negative;
    } else {
      // A language absent from a per-language expectation must be absent here too.
      row.pass = expected.per_language.empty();
    }
    all_rows = all_rows && row.pass;
    report.rows.push_back(row);
  }

  const auto [exp_pos, exp_neg] = expected.expected_totals();
  report.total.language = "TOTAL";
  report.total.expected_positive = exp_pos;
  report.total.expected_negative = exp_neg;
  for (const auto& [lang, counts] : actual) {
    report.total.actual_positive += counts.first;
    report.total.actual_negative += counts.second;
  }
  report.total.pass = report.total.actual_positive == exp_pos && report.total.actual_negative == exp_neg;
  report.passed = all_rows && report.total.pass;
  return report;
}

}  // namespace claimcheck::corpus
