#include <gtest/gtest.h>

#include <cmath>

#include "claimcheck/classifier/train.hpp"
#include "claimcheck/error.hpp"
#include "claimcheck/random.hpp"
#include "test_support.hpp"

namespace claimcheck::classifier {
namespace {

TEST(PlateauScheduler, HalvesAfterThreeFlatEpochs) {
  PlateauScheduler s(0.1, 0.5, 3);
  EXPECT_TRUE(s.step(0.5));
  EXPECT_FALSE(s.step(0.5));
  EXPECT_FALSE(s.step(0.4));
  EXPECT_EQ(s.learning_rate(), 0.1);
  EXPECT_FALSE(s.step(0.5));
  EXPECT_EQ(s.learning_rate(), 0.05);
  EXPECT_EQ(s.bad_epochs(), 0u);
  EXPECT_FALSE(s.step(0.5));
  EXPECT_FALSE(s.step(0.5));
  EXPECT_EQ(s.learning_rate(), 0.05);
  EXPECT_FALSE(s.step(0.5));
  EXPECT_EQ(s.learning_rate(), 0.025);
}

TEST(PlateauScheduler, ImprovementResetsCounter) {
  PlateauScheduler s(3e-5, 0.5, 3);
  s.step(0.1);
  s.step(0.1);
  s.step(0.1);
  EXPECT_TRUE(s.step(0.2));
  EXPECT_EQ(s.bad_epochs(), 0u);
  s.step(0.2);
  s.step(0.2);
  EXPECT_EQ(s.learning_rate(), 3e-5);
  s.step(0.2);
  EXPECT_EQ(s.learning_rate(), 1.5e-5);
}

Example random_example(SeededRng& rng, std::uint32_t dim) {
  Example ex;
  std::vector<std::uint32_t> idx;
  const auto active = 1 + rng.uniform_below(6);
  while (idx.size() < active) {
    const auto f = static_cast<std::uint32_t>(rng.uniform_below(dim));
    if (std::find(idx.begin(), idx.end(), f) == idx.end()) idx.push_back(f);
  }
  std::sort(idx.begin(), idx.end());
  ex.features.indices = idx;
  for (std::size_t i = 0; i < idx.size(); ++i) ex.features.values.push_back(rng.uniform01() * 2.0 - 0.5);
  const auto roll = rng.uniform_below(4);
  if (roll != 0) ex.labels.vfc = rng.uniform_below(2) == 1;
  if (roll != 1) ex.labels.harmful = rng.uniform_below(2) == 1;
  return ex;
}

TEST(LinearHead, GradientMatchesCentralDifferences) {
  const std::uint32_t dim = 16;
  SeededRng rng(31);
  const double h = 1e-5;
  std::size_t checked = 0;
  for (int instance = 0; instance < 50; ++instance) {
    LinearHead head(dim);
    for (auto& w : head.weights()) w = rng.uniform01() * 2.0 - 1.0;
    for (auto& b : head.bias()) b = rng.uniform01() - 0.5;
    std::vector<Example> batch;
    const auto n = 1 + rng.uniform_below(4);
    for (std::uint64_t i = 0; i < n; ++i) batch.push_back(random_example(rng, dim));

    std::vector<double> gw;
    std::array<double, 4> gb{};
    head.gradient(batch, gw, gb);
    ASSERT_EQ(gw.size(), dim * 4u);

    auto check = [&](double& param, double analytic) {
      const double saved = param;
      param = saved + h;
      const double up = head.loss(batch);
      param = saved - h;
      const double down = head.loss(batch);
      param = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double scale = std::max(std::abs(analytic) + std::abs(numeric), 1e-6);
      EXPECT_LE(std::abs(analytic - numeric) / scale, 1e-4) << "instance " << instance;
      ++checked;
    };
    for (std::size_t k = 0; k < 4; ++k) check(head.bias()[k], gb[k]);
    for (std::size_t j = 0; j < head.weights().size(); ++j) check(head.weights()[j], gw[j]);
  }
  EXPECT_EQ(checked, 50u * (4 + 16 * 4));
}

TEST(LinearHead, MaskedLabelsContributeNothing) {
  LinearHead head(8);
  Example ex;
  ex.features.indices = {2};
  ex.features.values = {1.0};
  ex.labels.vfc = true;
  std::vector<double> gw;
  std::array<double, 4> gb{};
  head.gradient(std::span(&ex, 1), gw, gb);
  EXPECT_EQ(gb[2], 0.0);
  EXPECT_EQ(gb[3], 0.0);
  EXPECT_DOUBLE_EQ(gb[0], -0.5);
  EXPECT_DOUBLE_EQ(gb[1], 0.5);
  EXPECT_DOUBLE_EQ(head.loss(std::span(&ex, 1)), 2.0 * std::log(2.0));
}

TEST(LinearHead, FullBatchLossDecreasesAtSmallRate) {
  const auto c = testing::separable_collection();
  HashingParams p;
  p.dim = 1u << 12;
  std::vector<Example> data;
  for (const auto& post : c.posts) data.push_back(make_example(post, p));
  LinearHead head(p.dim);
  double prev = head.loss(data);
  for (int step = 0; step < 30; ++step) {
    head.sgd_step(data, 1e-3);
    const double now = head.loss(data);
    ASSERT_LE(now, prev) << "step " << step;
    prev = now;
  }
}

TEST(Train, SeparableFixtureIsLearned) {
  const auto& r = testing::separable_result();
  EXPECT_GE(r.best_val_accuracy, 0.95);
  EXPECT_LE(r.history.size(), 15u);
  EXPECT_GE(r.best_epoch, 1u);
  EXPECT_EQ(r.history[r.best_epoch - 1].val_accuracy, r.best_val_accuracy);
  const auto c = testing::separable_collection();
  std::vector<Example> val;
  for (const auto& post : c.fold(corpus::Fold::val)) val.push_back(make_example(post, r.best.params()));
  EXPECT_EQ(label_accuracy(r.best, val), r.best_val_accuracy);
}

TEST(Train, LearningRateScheduleFollowsImprovementFlags) {
  const auto& r = testing::separable_result();
  const auto config = testing::small_config();
  double lr = config.learning_rate;
  std::size_t flat = 0;
  std::size_t halvings = 0;
  for (const auto& e : r.history) {
    ASSERT_EQ(e.learning_rate, lr) << "epoch " << e.epoch;
    flat = e.improved ? 0 : flat + 1;
    if (flat == 3) {
      lr *= 0.5;
      flat = 0;
      ++halvings;
    }
  }
  EXPECT_GE(halvings, 1u);
}

TEST(Train, BitIdenticalAcrossRuns) {
  const auto c = testing::separable_collection();
  auto config = testing::small_config();
  config.max_epochs = 3;
  const auto a = train_baseline(c.fold(corpus::Fold::train), c.fold(corpus::Fold::val), config);
  const auto b = train_baseline(c.fold(corpus::Fold::train), c.fold(corpus::Fold::val), config);
  EXPECT_EQ(a.last, b.last);
  EXPECT_EQ(a.best, b.best);
  config.seed = 12;
  const auto d = train_baseline(c.fold(corpus::Fold::train), c.fold(corpus::Fold::val), config);
  EXPECT_NE(a.last, d.last);
}

TEST(Train, Errors) {
  const auto c = testing::separable_collection();
  const auto train = c.fold(corpus::Fold::train);
  const auto val = c.fold(corpus::Fold::val);
  auto config = testing::small_config();
  EXPECT_THROW(train_baseline({}, val, config), ConfigError);
  EXPECT_THROW(train_baseline(train, {}, config), ConfigError);
  config.max_epochs = 0;
  EXPECT_THROW(train_baseline(train, val, config), ConfigError);
  config = testing::small_config();
  auto unlabeled = train;
  unlabeled.push_back(testing::make_post("nolabel", "text"));
  EXPECT_THROW(train_baseline(unlabeled, val, config), Error);
  config.batch_size = 0;
  EXPECT_THROW(config.validate(), ConfigError);
  config = testing::small_config();
  config.anneal_factor = 1.5;
  EXPECT_THROW(config.validate(), ConfigError);
}

TEST(Train, LogsOneEventPerEpoch) {
  const auto c = testing::separable_collection();
  auto config = testing::small_config();
  config.max_epochs = 2;
  Log log;
  train_baseline(c.fold(corpus::Fold::train), c.fold(corpus::Fold::val), config, &log);
  std::size_t epochs = 0;
  for (const auto& e : log.entries()) epochs += e.event == "epoch";
  EXPECT_EQ(epochs, 2u);
}

}  // namespace
}  // namespace claimcheck::classifier
