#pragma once

#include <vector>

#include "claimcheck/log.hpp"
#include "claimcheck/post.hpp"
#include "claimcheck/preprocess/clean.hpp"
#include "claimcheck/preprocess/filters.hpp"

namespace claimcheck::preprocess {

// Keeps the first post for each exact (case-sensitive) text; order is kept.
std::vector<Post> dedupe(const std::vector<Post>& posts);

// Per post: strip_social, then method-1 cleaning; empty results are dropped,
// then duplicates. Method 2 additionally drops posts failing alphabet_keep,
// then length_keep. Ids and labels are never modified.
std::vector<Post> preprocess(const std::vector<Post>& posts, const PreprocessConfig& config,
                             const TextCleaner& cleaner = default_cleaner(), Log* log = nullptr);

// Cleaning applied to a single text by the service and by `predict`:
// strip_social followed by method-1 cleaning, never a filter.
std::string clean_text(std::string_view text, const TextCleaner& cleaner = default_cleaner());

}  // namespace claimcheck::preprocess
