#include "claimcheck/preprocess/pipeline.hpp"

#include <string_view>
#include <unordered_set>

namespace claimcheck::preprocess {

std::vector<Post> dedupe(const std::vector<Post>& posts) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(posts.size());
  std::vector<Post> out;
  out.reserve(posts.size());
  for (const auto& post : posts) {
    if (seen.insert(post.text).second) out.push_back(post);
  }
  return out;
}

std::string clean_text(std::string_view text, const TextCleaner& cleaner) {
  return cleaner.clean(strip_social(text));
}

std::vector<Post> preprocess(const std::vector<Post>& posts, const PreprocessConfig& config,
                             const TextCleaner& cleaner, Log* log) {
  config.validate();

  std::vector<Post> cleaned;
  cleaned.reserve(posts.size());
  std::size_t empty = 0;
  for (const auto& post : posts) {
    Post copy = post;
    copy.text = cleaner.clean(config.strip_social ? strip_social(post.text) : post.text, config.rules);
    if (copy.text.empty()) {
      ++empty;
      continue;
    }
    cleaned.push_back(std::move(copy));
  }

  const std::size_t before_dedupe = cleaned.size();
  if (config.dedupe) cleaned = dedupe(cleaned);
  const std::size_t duplicates = before_dedupe - cleaned.size();

  std::size_t script_dropped = 0;
  std::size_t length_dropped = 0;
  if (config.method == 2) {
    std::vector<Post> kept;
    kept.reserve(cleaned.size());
    for (auto& post : cleaned) {
      if (!alphabet_keep(post.text, config.alphabet_whitelist)) {
        ++script_dropped;
        continue;
      }
      if (!length_keep(post.text, config)) {
        ++length_dropped;
        continue;
      }
      kept.push_back(std::move(post));
    }
    cleaned = std::move(kept);
  }

  if (log != nullptr) {
    log->info("preprocess", {{"method", std::to_string(config.method)},
                             {"input", std::to_string(posts.size())},
                             {"empty_dropped", std::to_string(empty)},
                             {"duplicates_dropped", std::to_string(duplicates)},
                             {"script_dropped", std::to_string(script_dropped)},
                             {"length_dropped", std::to_string(length_dropped)},
                             {"output", std::to_string(cleaned.size())}});
  }
  return cleaned;
}

}  // namespace claimcheck::preprocess
