#include <gtest/gtest.h>

#include <algorithm>

#include "claimcheck/error.hpp"
#include "claimcheck/evaluation/length_analysis.hpp"
#include "claimcheck/random.hpp"
#include "test_support.hpp"

namespace claimcheck::evaluation {
namespace {

TEST(LengthAnalysis, EightItemFixture) {
  std::vector<LengthItem> items;
  for (std::size_t len = 10; len <= 80; len += 10) items.push_back({len, len != 10 && len != 50});
  const auto r = length_quartile_recall(items);
  EXPECT_EQ(r.cut_points, (std::array<std::size_t, 3>{20, 40, 60}));
  const std::array<std::pair<std::size_t, std::size_t>, 4> bounds{{{10, 20}, {20, 40}, {40, 60}, {60, 80}}};
  const std::array<double, 4> recalls{0.5, 1.0, 0.5, 1.0};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.bins[i].lower, bounds[i].first);
    EXPECT_EQ(r.bins[i].upper, bounds[i].second);
    EXPECT_EQ(r.bins[i].lower_inclusive, i == 0);
    EXPECT_EQ(r.bins[i].total, 2u);
    EXPECT_EQ(*r.bins[i].recall, recalls[i]);
  }
  EXPECT_EQ(r.overall_recall, 0.75);
}

TEST(LengthAnalysis, AllCorrect) {
  std::vector<LengthItem> items;
  for (std::size_t len = 1; len <= 40; ++len) items.push_back({len * 3, true});
  for (const auto& bin : length_quartile_recall(items).bins) EXPECT_EQ(*bin.recall, 1.0);
}

TEST(LengthAnalysis, EmptyIsAnError) {
  EXPECT_THROW(length_quartile_recall({}), ConfigError);
}

TEST(LengthAnalysis, NearestRank) {
  const std::vector<std::size_t> v{15, 20, 35, 40, 50};
  EXPECT_EQ(nearest_rank(v, 0.05), 15u);
  EXPECT_EQ(nearest_rank(v, 0.30), 20u);
  EXPECT_EQ(nearest_rank(v, 0.40), 20u);
  EXPECT_EQ(nearest_rank(v, 0.50), 35u);
  EXPECT_EQ(nearest_rank(v, 1.00), 50u);
}

TEST(LengthAnalysis, WeightedBinRecallEqualsOverall) {
  SeededRng rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LengthItem> items(1 + rng.uniform_below(300));
    for (auto& it : items) {
      it.length = 15 + rng.uniform_below(trial % 3 == 0 ? 5 : 486);  // some sets are tie-heavy
      it.correct = rng.uniform01() < 0.7;
    }
    const auto r = length_quartile_recall(items);
    std::size_t total = 0;
    double weighted = 0.0;
    for (const auto& bin : r.bins) {
      total += bin.total;
      if (bin.recall) weighted += *bin.recall * static_cast<double>(bin.total);
    }
    ASSERT_EQ(total, items.size());
    EXPECT_NEAR(weighted / static_cast<double>(total), r.overall_recall, 1e-12);
    const auto correct = std::count_if(items.begin(), items.end(), [](const LengthItem& i) { return i.correct; });
    EXPECT_EQ(r.overall_recall, static_cast<double>(correct) / static_cast<double>(items.size()));
    EXPECT_LE(r.cut_points[0], r.cut_points[1]);
    EXPECT_LE(r.cut_points[1], r.cut_points[2]);
  }
}

TEST(LengthAnalysis, PositiveItemsFromPredictions) {
  classifier::PredictionSet set;
  set.add("a", classifier::LabelVector::from_array({0.9, 0.1, 0.5, 0.5}));
  set.add("b", classifier::LabelVector::from_array({0.1, 0.9, 0.5, 0.5}));
  set.add("c", classifier::LabelVector::from_array({0.9, 0.1, 0.5, 0.5}));
  const std::vector<Post> gold{testing::make_post("a", "Здравей", "bg", true),
                               testing::make_post("b", "two words", "en", true),
                               testing::make_post("c", "negative", "en", false)};
  const auto items = positive_items(set, gold, Task::vfc);
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].length, 7u);
  EXPECT_TRUE(items[0].correct);
  EXPECT_EQ(items[1].length, 9u);
  EXPECT_FALSE(items[1].correct);
}

}  // namespace
}  // namespace claimcheck::evaluation
