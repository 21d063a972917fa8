#include "claimcheck/preprocess/filters.hpp"

#include <unicode/uscript.h>

#include "claimcheck/error.hpp"
#include "claimcheck/unicode.hpp"

namespace claimcheck::preprocess {

ScriptSet ScriptSet::defaults() {
  ScriptSet s;
  s.insert(USCRIPT_LATIN);
  s.insert(USCRIPT_CYRILLIC);
  s.insert(USCRIPT_ARABIC);
  return s;
}

ScriptSet ScriptSet::parse(std::string_view names) {
  ScriptSet s;
  std::size_t start = 0;
  while (start <= names.size()) {
    auto end = names.find(',', start);
    if (end == std::string_view::npos) end = names.size();
    std::string name(names.substr(start, end - start));
    while (!name.empty() && name.front() == ' ') name.erase(name.begin());
    while (!name.empty() && name.back() == ' ') name.pop_back();
    if (!name.empty()) {
      UErrorCode status = U_ZERO_ERROR;
      UScriptCode code = USCRIPT_INVALID_CODE;
      const int n = uscript_getCode(name.c_str(), &code, 1, &status);
      if (U_FAILURE(status) || n < 1 || code == USCRIPT_INVALID_CODE) {
        throw ConfigError("unknown script '" + name + "'");
      }
      s.insert(code);
    }
    start = end + 1;
  }
  if (s.codes_.empty()) throw ConfigError("empty script whitelist");
  return s;
}

bool ScriptSet::contains_char(char32_t cp) const {
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode code = uscript_getScript(static_cast<UChar32>(cp), &status);
  return U_SUCCESS(status) && codes_.contains(code);
}

std::vector<std::string> ScriptSet::names() const {
  std::vector<std::string> out;
  for (int code : codes_) out.emplace_back(uscript_getName(static_cast<UScriptCode>(code)));
  return out;
}

void PreprocessConfig::validate() const {
  if (method != 1 && method != 2) {
    throw ConfigError("preprocessing method must be 1 or 2, got " + std::to_string(method));
  }
  if (min_len_chars > max_len_chars) {
    throw ConfigError("min_len_chars (" + std::to_string(min_len_chars) + ") exceeds max_len_chars (" +
                      std::to_string(max_len_chars) + ")");
  }
  if (method == 2 && !(rules.all() && strip_social && dedupe)) {
    throw ConfigError("method 2 requires every method-1 rule to be enabled");
  }
}

bool alphabet_keep(std::string_view text, const ScriptSet& whitelist) {
  std::size_t alphabetic = 0;
  std::size_t whitelisted = 0;
  for (char32_t cp : unicode::decode(text)) {
    if (!unicode::is_alpha(cp)) continue;
    ++alphabetic;
    if (whitelist.contains_char(cp)) ++whitelisted;
  }
  return alphabetic > 0 && 2 * whitelisted > alphabetic;
}

bool length_keep(std::string_view text, const PreprocessConfig& config) {
  std::size_t chars = 0;
  std::size_t digits = 0;
  for (char32_t cp : unicode::decode(text)) {
    ++chars;
    if (unicode::is_digit(cp)) ++digits;
  }
  return chars >= config.min_len_chars && chars <= config.max_len_chars &&
         chars - digits >= config.min_nondigit_chars;
}

}  // namespace claimcheck::preprocess
