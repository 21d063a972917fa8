#include "claimcheck/evaluation/length_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "claimcheck/error.hpp"
#include "claimcheck/evaluation/metrics.hpp"
#include "claimcheck/unicode.hpp"

namespace claimcheck::evaluation {

std::size_t nearest_rank(std::span<const std::size_t> sorted, double p) {
  if (sorted.empty()) throw ConfigError("percentile of an empty set");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

LengthBinReport length_quartile_recall(std::span<const LengthItem> items) {
  if (items.empty()) throw ConfigError("length analysis needs at least one item");
  std::vector<std::size_t> lengths;
  lengths.reserve(items.size());
  for (const auto& item : items) lengths.push_back(item.length);
  std::sort(lengths.begin(), lengths.end());

  LengthBinReport report;
  report.cut_points = {nearest_rank(lengths, 0.25), nearest_rank(lengths, 0.50), nearest_rank(lengths, 0.75)};
  const std::array<std::size_t, 5> edges{lengths.front(), report.cut_points[0], report.cut_points[1],
                                         report.cut_points[2], lengths.back()};
  for (std::size_t i = 0; i < 4; ++i) {
    report.bins[i].lower = edges[i];
    report.bins[i].upper = edges[i + 1];
    report.bins[i].lower_inclusive = i == 0;
  }
  for (const auto& item : items) {
    std::size_t bin = 3;
    for (std::size_t i = 0; i < 3; ++i) {
      if (item.length <= report.cut_points[i]) {
        bin = i;
        break;
      }
    }
    auto& b = report.bins[bin];
    ++b.total;
    if (item.correct) ++b.correct;
    ++report.total;
    if (item.correct) ++report.correct;
  }
  for (auto& b : report.bins) {
    if (b.total) b.recall = static_cast<double>(b.correct) / static_cast<double>(b.total);
  }
  report.overall_recall = static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

std::vector<LengthItem> positive_items(const classifier::PredictionSet& predictions,
                                       const std::vector<Post>& gold, Task task) {
  const auto ok = correctness(predictions, gold, task);
  std::vector<LengthItem> items;
  for (const auto& post : gold) {
    const auto& label = post.labels.get(task);
    if (!label || !*label) continue;
    items.push_back({unicode::char_count(post.text), ok.at(post.id)});
  }
  return items;
}

}  // namespace claimcheck::evaluation
