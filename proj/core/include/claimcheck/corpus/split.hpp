#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "claimcheck/corpus/dataset.hpp"

namespace claimcheck::corpus {

struct SplitSpec {
  enum class Mode { explicit_counts, fractions };

  Mode mode = Mode::fractions;
  std::array<std::size_t, 3> counts{};  // train, val, test
  std::array<double, 3> fractions{};    // train, val, test
  std::uint64_t seed = 0;
  // Unset: on for fractions, off for explicit counts.
  std::optional<bool> stratify;

  static SplitSpec with_counts(std::size_t train, std::size_t val, std::size_t test, std::uint64_t seed);
  static SplitSpec with_fractions(double train, double val, double test, std::uint64_t seed);

  bool stratified() const { return stratify.value_or(mode == Mode::fractions); }

  // Throws ConfigError; `total` is the collection size.
  void validate(std::size_t total) const;
};

std::string_view split_mode_name(SplitSpec::Mode mode);
SplitSpec::Mode parse_split_mode(std::string_view name);

// Seeded Fisher-Yates over the post order (see SeededRng), then prefix
// assignment train/val/test. The stratified variant groups posts by
// (vfc label, harmful label, language), visits strata in key order with one
// shared generator, and shuffles and assigns within each stratum.
//
// Fold sizes per stratum: fraction mode uses largest-remainder rounding of
// fraction * stratum size; explicit-count mode uses a controlled rounding
// that keeps every cell within one item of its proportional share while
// matching the requested fold totals exactly.
std::map<std::string, Fold> assign_folds(const std::vector<Post>& posts, const SplitSpec& spec);

Collection split(Collection collection, const SplitSpec& spec);

// Stratum key used by the stratified variant, e.g. "vfc=1|harmful=-|en".
std::string stratum_key(const Post& post);

}  // namespace claimcheck::corpus
