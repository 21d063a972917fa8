#include "claimcheck/preprocess/translate.hpp"

#include <exception>

#include "claimcheck/error.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/unicode.hpp"

namespace claimcheck::preprocess {

DictionaryTranslator DictionaryTranslator::load(const std::filesystem::path& path) {
  const auto content = io::read_file(path);
  std::map<std::string, std::string, std::less<>> entries;
  std::size_t line_no = 0;
  for (auto line : io::split_lines(content)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = io::split_tabs(line);
    if (fields.size() != 2) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 2 fields", line_no);
    }
    entries.emplace(io::unescape_field(fields[0]), io::unescape_field(fields[1]));
  }
  return DictionaryTranslator(std::move(entries));
}

std::string DictionaryTranslator::translate(std::string_view text, std::string_view,
                                            std::string_view) const {
  const auto cps = unicode::decode(text);
  std::string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && unicode::is_whitespace(cps[i])) ++i;
    if (i == cps.size()) break;
    std::size_t end = i;
    while (end < cps.size() && !unicode::is_whitespace(cps[end])) ++end;
    const auto token = unicode::encode(std::u32string_view(cps).substr(i, end - i));
    if (!out.empty()) out += ' ';
    auto it = entries_.find(token);
    out += it == entries_.end() ? token : it->second;
    i = end;
  }
  return out;
}

std::vector<Post> translate_posts(const std::vector<Post>& posts, const Translator& translator,
                                  std::string_view target) {
  std::vector<Post> out;
  out.reserve(posts.size());
  for (const auto& post : posts) {
    Post copy = post;
    if (post.language != target) {
      try {
        copy.text = translator.translate(post.text, post.language, target);
      } catch (const std::exception& e) {
        throw TranslationError("translation failed for post '" + post.id + "': " + e.what(), post.id);
      }
      copy.language = std::string(target);
    }
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace claimcheck::preprocess
