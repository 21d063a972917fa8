#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "claimcheck/classifier/predictions.hpp"
#include "claimcheck/post.hpp"

namespace claimcheck::evaluation {

struct LengthItem {
  std::size_t length = 0;  // Unicode scalar values
  bool correct = false;
};

struct LengthBin {
  std::size_t lower = 0;
  std::size_t upper = 0;
  bool lower_inclusive = false;  // only the first bin includes its lower bound
  std::size_t total = 0;
  std::size_t correct = 0;
  std::optional<double> recall;  // nullopt for an empty bin
};

struct LengthBinReport {
  std::array<std::size_t, 3> cut_points{};
  std::array<LengthBin, 4> bins{};
  std::size_t total = 0;
  std::size_t correct = 0;
  double overall_recall = 0.0;
};

// Nearest-rank percentile: the ceil(p * n)-th smallest value (1-based).
std::size_t nearest_rank(std::span<const std::size_t> sorted, double p);

// Cut points are the nearest-rank 25th/50th/75th percentiles of the item
// lengths; bins are [min, q25], (q25, q50], (q50, q75], (q75, max].
// Throws ConfigError on an empty item set.
LengthBinReport length_quartile_recall(std::span<const LengthItem> items);

// Gold positives (TP and FN) for `task`, with correctness of the decision.
std::vector<LengthItem> positive_items(const classifier::PredictionSet& predictions,
                                       const std::vector<Post>& gold, Task task);

}  // namespace claimcheck::evaluation
