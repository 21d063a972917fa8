#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/preprocess/clean.hpp"

namespace claimcheck::preprocess {

// Set of Unicode scripts (ICU UScriptCode values).
class ScriptSet {
 public:
  ScriptSet() = default;

  // Latin, Cyrillic (stands in for Bulgarian), Arabic.
  static ScriptSet defaults();
  // Comma-separated script names or ISO 15924 codes: "Latin,Cyrl,Arabic".
  static ScriptSet parse(std::string_view names);

  void insert(int script_code) { codes_.insert(script_code); }
  bool contains_script(int script_code) const { return codes_.contains(script_code); }
  bool contains_char(char32_t cp) const;
  std::vector<std::string> names() const;

  friend bool operator==(const ScriptSet&, const ScriptSet&) = default;

 private:
  std::set<int> codes_;
};

struct PreprocessConfig {
  int method = 1;
  std::size_t min_len_chars = 15;
  std::size_t max_len_chars = 500;
  std::size_t min_nondigit_chars = 30;
  ScriptSet alphabet_whitelist = ScriptSet::defaults();
  CleaningRules rules;
  bool strip_social = true;
  bool dedupe = true;

  // Throws ConfigError.
  void validate() const;
};

// True iff more than half of the alphabetic characters belong to a
// whitelisted script. No alphabetic characters: false.
bool alphabet_keep(std::string_view text, const ScriptSet& whitelist);

// Length thresholds in Unicode scalar values; digits are Unicode Nd.
bool length_keep(std::string_view text, const PreprocessConfig& config);

}  // namespace claimcheck::preprocess
