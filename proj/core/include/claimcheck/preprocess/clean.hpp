#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace claimcheck::preprocess {

// A versioned word list shipped as a UTF-8 data file: one entry per line,
// '#' comment lines, and a "# version: N" line.
struct Lexicon {
  int version = 0;
  std::vector<std::string> entries;

  static Lexicon parse(std::string_view content, std::string_view origin);
  static Lexicon load(const std::filesystem::path& path);
};

// Built into the library from core/data/.
const Lexicon& default_emoticons();
const Lexicon& default_url_shorteners();

struct CleaningRules {
  bool urls = true;
  bool emails = true;
  bool emoji = true;  // Unicode emoji and ASCII emoticons
  bool punctuation = true;

  bool all() const { return urls && emails && emoji && punctuation; }
};

// Method-1 cleaning. Rules run in a fixed order: URLs, e-mail addresses,
// emoji/emoticons, punctuation; then every whitespace run (newlines
// included) becomes one space and the ends are trimmed. URLs, addresses and
// emoji are replaced by a space, punctuation and symbols are deleted.
class TextCleaner {
 public:
  TextCleaner();
  TextCleaner(const Lexicon& emoticons, const Lexicon& url_shorteners);

  std::string clean(std::string_view text, const CleaningRules& rules = {}) const;

 private:
  void remove_urls(std::u32string& text) const;
  void remove_emoticons(std::u32string& text) const;

  std::vector<std::u32string> emoticons_;  // longest first
  std::vector<std::u32string> shorteners_;
};

const TextCleaner& default_cleaner();

std::string clean_method1(std::string_view text);

// Drops every whitespace-separated token that starts with '#' or '@' and
// re-joins the rest with single spaces.
std::string strip_social(std::string_view text);

// Exposed for property tests.
bool is_emoji(char32_t cp);

}  // namespace claimcheck::preprocess
