#include <gtest/gtest.h>

#include "claimcheck/error.hpp"
#include "claimcheck/evaluation/metrics.hpp"
#include "claimcheck/random.hpp"
#include "test_support.hpp"

namespace claimcheck::evaluation {
namespace {

using classifier::LabelVector;
using classifier::PredictionSet;

LabelVector vote(bool positive) {
  return positive ? LabelVector::from_array({0.8, 0.2, 0.8, 0.2}) : LabelVector::from_array({0.2, 0.8, 0.2, 0.8});
}

TEST(Metrics, HandCountedExample) {
  const auto m = Metrics::from(Confusion{3, 2, 1, 4});
  EXPECT_DOUBLE_EQ(*m.accuracy, 0.7);
  EXPECT_DOUBLE_EQ(*m.recall, 0.75);
  EXPECT_DOUBLE_EQ(*m.precision, 0.6);
  EXPECT_NEAR(*m.f1, 2.0 / 3.0, 1e-15);
}

TEST(Metrics, PerfectPredictor) {
  std::vector<Post> gold;
  PredictionSet set;
  for (int i = 0; i < 10; ++i) {
    gold.push_back(testing::make_post("p" + std::to_string(i), "t", "en", i % 3 == 0));
    set.add(gold.back().id, vote(i % 3 == 0));
  }
  const auto r = evaluate(set, gold, Task::vfc);
  EXPECT_EQ(*r.overall.accuracy, 1.0);
  EXPECT_EQ(*r.overall.recall, 1.0);
  EXPECT_EQ(*r.overall.f1, 1.0);
}

TEST(Metrics, NoGoldPositivesMeansUndefinedRecall) {
  const auto m = Metrics::from(Confusion{0, 2, 0, 3});
  EXPECT_FALSE(m.recall.has_value());
  EXPECT_EQ(*m.precision, 0.0);
  EXPECT_FALSE(Metrics::from(Confusion{}).accuracy.has_value());
  EXPECT_FALSE(Metrics::from(Confusion{0, 0, 0, 5}).f1.has_value());
}

TEST(Metrics, MatchesBruteForceRecount) {
  SeededRng rng(1000);
  std::vector<Post> gold;
  PredictionSet set;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::map<std::string, std::array<std::size_t, 4>> per_lang;
  const char* langs[] = {"en", "bg", "ar"};
  for (int i = 0; i < 1000; ++i) {
    const bool g = rng.uniform_below(2) == 1;
    const bool p = rng.uniform_below(2) == 1;
    const std::string lang = langs[rng.uniform_below(3)];
    gold.push_back(testing::make_post("i" + std::to_string(i), "t", lang, std::nullopt, g));
    set.add(gold.back().id, vote(p));
    auto& c = per_lang[lang];
    if (p && g) ++tp, ++c[0];
    if (p && !g) ++fp, ++c[1];
    if (!p && g) ++fn, ++c[2];
    if (!p && !g) ++tn, ++c[3];
  }
  const auto r = evaluate(set, gold, Task::harmful);
  EXPECT_EQ(r.overall.counts, (Confusion{tp, fp, fn, tn}));
  const double n = 1000.0;
  EXPECT_NEAR(*r.overall.accuracy, (tp + tn) / n, 1e-12);
  EXPECT_NEAR(*r.overall.recall, static_cast<double>(tp) / (tp + fn), 1e-12);
  EXPECT_NEAR(*r.overall.precision, static_cast<double>(tp) / (tp + fp), 1e-12);
  const double pr = static_cast<double>(tp) / (tp + fp);
  const double rc = static_cast<double>(tp) / (tp + fn);
  EXPECT_NEAR(*r.overall.f1, 2 * pr * rc / (pr + rc), 1e-12);
  Confusion sum;
  for (const auto& [lang, c] : per_lang) {
    EXPECT_EQ(r.per_language.at(lang).counts, (Confusion{c[0], c[1], c[2], c[3]}));
    sum += r.per_language.at(lang).counts;
  }
  EXPECT_EQ(sum, r.overall.counts);
}

TEST(Metrics, UnlabeledGoldAndExtraPredictionsIgnored) {
  std::vector<Post> gold{testing::make_post("a", "t", "en", true), testing::make_post("b", "t", "en")};
  PredictionSet set;
  set.add("a", vote(true));
  set.add("zzz", vote(false));
  const auto r = evaluate(set, gold, Task::vfc);
  EXPECT_EQ(r.overall.counts.total(), 1u);
}

TEST(Metrics, PredictionWithoutTaskPairIsMissing) {
  std::vector<Post> gold{testing::make_post("a", "t", "en", std::nullopt, true)};
  PredictionSet set;
  set.add("a", LabelVector{classifier::ScorePair{0.9, 0.1}, std::nullopt});
  EXPECT_THROW(evaluate(set, gold, Task::harmful), MissingPredictionError);
}

TEST(Metrics, DecisionsAndCorrectness) {
  std::vector<Post> gold{testing::make_post("a", "t", "en", true), testing::make_post("b", "t", "nl", false)};
  const auto r = evaluate_decisions({{"a", false}, {"b", false}}, gold, Task::vfc);
  EXPECT_EQ(r.overall.counts, (Confusion{0, 0, 1, 1}));
  EXPECT_THROW(evaluate_decisions({{"a", true}}, gold, Task::vfc), MissingPredictionError);
  PredictionSet set;
  set.add("a", vote(true));
  set.add("b", vote(true));
  EXPECT_EQ(correctness(set, gold, Task::vfc), (std::map<std::string, bool>{{"a", true}, {"b", false}}));
}

EvalReport report_with(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  EvalReport r;
  r.overall = Metrics::from(Confusion{tp, fp, fn, tn});
  return r;
}

TEST(CompareReport, BestIsFlagged) {
  // 0.7558 vs 0.7388 accuracy over 10,000 items.
  const auto t = compare_report({{"large", report_with(4000, 1000, 1442, 3558)},
                                 {"base", report_with(3900, 1100, 1512, 3488)}});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_NEAR(*t.rows[0].metrics.accuracy, 0.7558, 1e-12);
  EXPECT_NEAR(*t.rows[1].metrics.accuracy, 0.7388, 1e-12);
  EXPECT_TRUE(t.rows[0].best_accuracy);
  EXPECT_FALSE(t.rows[1].best_accuracy);
}

TEST(CompareReport, TiesFlagBothAndPreconditions) {
  const auto t = compare_report({{"a", report_with(3, 2, 1, 4)}, {"b", report_with(3, 2, 1, 4)}});
  EXPECT_TRUE(t.rows[0].best_accuracy && t.rows[1].best_accuracy);
  EXPECT_TRUE(t.rows[0].best_f1 && t.rows[1].best_f1);
  EXPECT_THROW(compare_report({{"a", report_with(3, 2, 1, 4)}}), ConfigError);
  EXPECT_THROW(compare_report({{"a", report_with(3, 2, 1, 4)}, {"b", report_with(3, 2, 1, 5)}}), ConfigError);
  auto harm = report_with(3, 2, 1, 4);
  harm.task = Task::harmful;
  EXPECT_THROW(compare_report({{"a", report_with(3, 2, 1, 4)}, {"b", harm}}), ConfigError);
}

}  // namespace
}  // namespace claimcheck::evaluation
