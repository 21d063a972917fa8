#include "claimcheck/preprocess/clean.hpp"

#include <unicode/uchar.h>

#include <algorithm>
#include <charconv>

#include "claimcheck/error.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/unicode.hpp"
#include "embedded_data.hpp"

namespace claimcheck::preprocess {
namespace {

constexpr char32_t kSpace = U' ';

char32_t ascii_lower(char32_t c) { return (c >= U'A' && c <= U'Z') ? c + 32 : c; }

bool starts_with_icase(std::u32string_view text, std::size_t pos, std::u32string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (ascii_lower(text[pos + k]) != ascii_lower(prefix[k])) return false;
  }
  return true;
}

std::size_t run_to_whitespace(std::u32string_view text, std::size_t pos) {
  while (pos < text.size() && !unicode::is_whitespace(text[pos])) ++pos;
  return pos;
}

bool is_ascii_alnum(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
}

bool is_ascii_alpha(char32_t c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z'); }

bool is_email_local(char32_t c) {
  return is_ascii_alnum(c) || c == U'.' || c == U'_' || c == U'%' || c == U'+' || c == U'-';
}

bool is_email_domain(char32_t c) { return is_ascii_alnum(c) || c == U'.' || c == U'-'; }

// Replaces [begin, end) by a single space.
void blank(std::u32string& text, std::size_t begin, std::size_t end) {
  text.replace(begin, end - begin, 1, kSpace);
}

void remove_emails(std::u32string& text) {
  std::size_t at = text.find(U'@');
  while (at != std::u32string::npos) {
    std::size_t left = at;
    while (left > 0 && is_email_local(text[left - 1])) --left;
    while (left < at && text[left] == U'.') ++left;
    std::size_t right = at + 1;
    while (right < text.size() && is_email_domain(text[right])) ++right;
    while (right > at + 1 && (text[right - 1] == U'.' || text[right - 1] == U'-')) --right;

    bool valid = left < at;
    if (valid) {
      std::u32string_view domain(text.data() + at + 1, right - at - 1);
      auto dot = domain.rfind(U'.');
      valid = dot != std::u32string_view::npos && dot > 0 && domain.size() - dot - 1 >= 2 &&
              std::all_of(domain.begin() + static_cast<std::ptrdiff_t>(dot) + 1, domain.end(),
                          is_ascii_alpha) &&
              domain.find(U"..") == std::u32string_view::npos;
    }
    if (valid) {
      blank(text, left, right);
      at = text.find(U'@', left + 1);
    } else {
      at = text.find(U'@', at + 1);
    }
  }
}

bool is_keycap_base(char32_t c) { return (c >= U'0' && c <= U'9') || c == U'#' || c == U'*'; }

bool is_emoji_component(char32_t c) {
  return c == 0xFE0E || c == 0xFE0F || c == 0x20E3 || (c >= 0x1F3FB && c <= 0x1F3FF) ||
         (c >= 0xE0020 && c <= 0xE007F);
}

void remove_emoji(std::u32string& text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char32_t c = text[i];
    // Keycap: [0-9#*] FE0F? 20E3
    if (is_keycap_base(c)) {
      std::size_t j = i + 1;
      if (j < n && text[j] == 0xFE0F) ++j;
      if (j < n && text[j] == 0x20E3) {
        out.push_back(kSpace);
        i = j + 1;
        continue;
      }
    }
    if (is_emoji(c)) {
      std::size_t j = i + 1;
      while (j < n) {
        if (is_emoji_component(text[j])) {
          ++j;
        } else if (text[j] == 0x200D && j + 1 < n && is_emoji(text[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      out.push_back(kSpace);
      i = j;
      continue;
    }
    // Orphan presentation selectors, keycap marks and tags carry nothing.
    if (c != 0x200D && is_emoji_component(c) && !(c >= 0x1F3FB && c <= 0x1F3FF)) {
      ++i;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  text = std::move(out);
}

void remove_punctuation(std::u32string& text) {
  std::erase_if(text, [](char32_t c) { return unicode::is_punct_or_symbol(c); });
}

void collapse_whitespace(std::u32string& text) {
  std::u32string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t c : text) {
    if (unicode::is_whitespace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(kSpace);
    pending_space = false;
    out.push_back(c);
  }
  text = std::move(out);
}

bool has_punct_or_symbol(std::u32string_view entry) {
  return std::any_of(entry.begin(), entry.end(), unicode::is_punct_or_symbol);
}

}  // namespace

bool is_emoji(char32_t cp) {
  const auto c = static_cast<UChar32>(cp);
  if (cp >= 0x1F1E6 && cp <= 0x1F1FF) return true;  // regional indicators
  if (cp < 0x80) return false;
  return u_hasBinaryProperty(c, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(c, UCHAR_EMOJI_PRESENTATION);
}

Lexicon Lexicon::parse(std::string_view content, std::string_view origin) {
  Lexicon lexicon;
  constexpr std::string_view kVersionTag = "# version:";
  for (auto line : io::split_lines(content)) {
    if (line.starts_with(kVersionTag)) {
      auto value = line.substr(kVersionTag.size());
      while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), lexicon.version);
      if (ec != std::errc{}) {
        throw ConfigError(std::string(origin) + ": bad version line '" + std::string(line) + "'");
      }
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    lexicon.entries.emplace_back(line);
  }
  if (lexicon.version <= 0) {
    throw ConfigError(std::string(origin) + ": missing '# version: N' line");
  }
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

const Lexicon& default_emoticons() {
  static const Lexicon lexicon = Lexicon::parse(detail::embedded_emoticons(), "emoticons.txt");
  return lexicon;
}

const Lexicon& default_url_shorteners() {
  static const Lexicon lexicon =
      Lexicon::parse(detail::embedded_url_shorteners(), "url_shorteners.txt");
  return lexicon;
}

TextCleaner::TextCleaner() : TextCleaner(default_emoticons(), default_url_shorteners()) {}

TextCleaner::TextCleaner(const Lexicon& emoticons, const Lexicon& url_shorteners) {
  for (const auto& entry : emoticons.entries) {
    auto decoded = unicode::decode(entry);
    // Keeps cleaning idempotent: a match can never re-form once
    // punctuation is gone.
    if (!has_punct_or_symbol(decoded)) {
      throw ConfigError("emoticon '" + entry + "' has no punctuation or symbol character");
    }
    emoticons_.push_back(std::move(decoded));
  }
  std::stable_sort(emoticons_.begin(), emoticons_.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& host : url_shorteners.entries) {
    auto decoded = unicode::decode(host);
    decoded.push_back(U'/');
    shorteners_.push_back(std::move(decoded));
  }
}

void TextCleaner::remove_urls(std::u32string& text) const {
  std::size_t i = 0;
  while (i < text.size()) {
    const bool boundary = i == 0 || !(unicode::is_alnum(text[i - 1]) || text[i - 1] == U'.' ||
                                      text[i - 1] == U'-' || text[i - 1] == U'/');
    bool match = false;
    if (boundary) {
      match = starts_with_icase(text, i, U"http://") || starts_with_icase(text, i, U"https://") ||
              starts_with_icase(text, i, U"www.");
      for (std::size_t k = 0; !match && k < shorteners_.size(); ++k) {
        match = starts_with_icase(text, i, shorteners_[k]);
      }
    }
    if (match) {
      blank(text, i, run_to_whitespace(text, i));
    }
    ++i;
  }
}

void TextCleaner::remove_emoticons(std::u32string& text) const {
  std::size_t i = 0;
  while (i < text.size()) {
    for (const auto& entry : emoticons_) {
      if (text.compare(i, entry.size(), entry) != 0) continue;
      const std::size_t end = i + entry.size();
      if (unicode::is_alnum(entry.front()) && i > 0 && unicode::is_alnum(text[i - 1])) continue;
      if (unicode::is_alnum(entry.back()) && end < text.size() && unicode::is_alnum(text[end])) {
        continue;
      }
      blank(text, i, end);
      break;
    }
    ++i;
  }
}

std::string TextCleaner::clean(std::string_view text, const CleaningRules& rules) const {
  auto cps = unicode::decode(text);
  if (rules.urls) remove_urls(cps);
  if (rules.emails) remove_emails(cps);
  if (rules.emoji) {
    remove_emoji(cps);
    remove_emoticons(cps);
  }
  if (rules.punctuation) remove_punctuation(cps);
  collapse_whitespace(cps);
  return unicode::encode(cps);
}

const TextCleaner& default_cleaner() {
  static const TextCleaner cleaner;
  return cleaner;
}

std::string clean_method1(std::string_view text) { return default_cleaner().clean(text); }

std::string strip_social(std::string_view text) {
  const auto cps = unicode::decode(text);
  std::u32string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && unicode::is_whitespace(cps[i])) ++i;
    if (i == cps.size()) break;
    const std::size_t end = run_to_whitespace(cps, i);
    const char32_t first = cps[i];
    const bool tag = first == U'#' || first == U'@' || first == 0xFF03 || first == 0xFF20;
    if (!tag) {
      if (!out.empty()) out.push_back(kSpace);
      out.append(cps, i, end - i);
    }
    i = end;
  }
  return unicode::encode(out);
}

}  // namespace claimcheck::preprocess
