#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/post.hpp"

namespace claimcheck::preprocess {

// Machine translation is an external service; implementations may throw.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(std::string_view text, std::string_view source_lang,
                                std::string_view target_lang) const = 0;
};

class IdentityTranslator final : public Translator {
 public:
  std::string translate(std::string_view text, std::string_view, std::string_view) const override {
    return std::string(text);
  }
};

// Word-for-word lookup over whitespace tokens; unknown tokens pass through.
// The output is re-joined with single spaces.
class DictionaryTranslator final : public Translator {
 public:
  explicit DictionaryTranslator(std::map<std::string, std::string, std::less<>> entries)
      : entries_(std::move(entries)) {}

  // Two-column TSV: source token, translation.
  static DictionaryTranslator load(const std::filesystem::path& path);

  std::string translate(std::string_view text, std::string_view source_lang,
                        std::string_view target_lang) const override;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Posts whose language differs from `target` get translated text and the
// target language tag. A translator failure rethrows as TranslationError
// carrying the post id.
std::vector<Post> translate_posts(const std::vector<Post>& posts, const Translator& translator,
                                  std::string_view target);

}  // namespace claimcheck::preprocess
