#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/corpus/dataset.hpp"

namespace claimcheck::corpus {

struct LanguageCount {
  std::string language;
  std::size_t positive = 0;
  std::size_t negative = 0;
};

// Expected per-language positive/negative counts for one task, over the
// whole collection or one fold.
struct CountExpectation {
  std::string name;
  Task task = Task::vfc;
  std::optional<Fold> fold;
  std::vector<LanguageCount> per_language;
  // Defaults to the sum of per_language.
  std::optional<std::pair<std::size_t, std::size_t>> totals;

  std::pair<std::size_t, std::size_t> expected_totals() const;

  // Published reference tables for the CLEF2022 task 1B/1C data:
  //   clef2022-1b-all   whole task-1B collection, vfc
  //   clef2022-1b-test  task-1B test fold, vfc
  //   clef2022-1c-test  task-1C test fold, harmful
  static CountExpectation preset(std::string_view name);
  static std::vector<std::string> preset_names();

  static CountExpectation parse(std::string_view json);
  static CountExpectation load(const std::filesystem::path& path);
};

struct CountRow {
  std::string language;  // "TOTAL" for the totals row
  std::optional<std::size_t> expected_positive;
  std::optional<std::size_t> expected_negative;
  std::size_t actual_positive = 0;
  std::size_t actual_negative = 0;
  bool pass = false;
};

struct VerificationReport {
  std::string name;
  Task task = Task::vfc;
  std::optional<Fold> fold;
  std::vector<CountRow> rows;  // per language, sorted by tag
  CountRow total;
  bool passed = false;
};

// Mismatches are reported, not thrown. Throws ConfigError only when a fold
// is expected but the collection has no split.
VerificationReport verify_reference_counts(const Collection& collection, const CountExpectation& expected);

}  // namespace claimcheck::corpus
