#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "claimcheck/classifier/features.hpp"
#include "claimcheck/classifier/model.hpp"
#include "claimcheck/log.hpp"
#include "claimcheck/post.hpp"

namespace claimcheck::classifier {

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  double anneal_factor = 0.5;
  std::size_t patience = 3;
  std::size_t max_epochs = 15;
  std::uint64_t seed = 0;
  HashingParams hashing;

  // Throws ConfigError.
  void validate() const;
};

// Reduce-on-plateau. A metric strictly above the best seen so far is an
// improvement; after `patience` consecutive non-improving epochs the rate is
// multiplied by the factor and the counter restarts.
class PlateauScheduler {
 public:
  PlateauScheduler(double learning_rate, double factor, std::size_t patience);

  double learning_rate() const { return lr_; }
  std::size_t bad_epochs() const { return bad_epochs_; }

  // Feeds one validation result; returns true when it improved.
  bool step(double metric);

 private:
  double lr_;
  double factor_;
  std::size_t patience_;
  std::size_t bad_epochs_ = 0;
  std::optional<double> best_;
};

struct Example {
  SparseVector features;
  TaskLabels labels;
};

Example make_example(const Post& post, const HashingParams& params);

// The trainable double-precision head. Outputs follow kLabelNames; a task
// label y sets the targets of its pair to (y, 1 - y). Absent labels are masked.
class LinearHead {
 public:
  explicit LinearHead(std::uint32_t dim);

  std::uint32_t dim() const { return dim_; }
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }
  std::array<double, 4>& bias() { return bias_; }
  const std::array<double, 4>& bias() const { return bias_; }

  std::array<double, 4> logits(const SparseVector& x) const;

  // Sum of per-label binary cross-entropy over present labels, averaged over
  // the number of examples.
  double loss(std::span<const Example> batch) const;

  // Dense gradient of loss(); grad_w has dim * 4 entries.
  void gradient(std::span<const Example> batch, std::vector<double>& grad_w,
                std::array<double, 4>& grad_b) const;

  // One gradient step over the batch, touching only active features.
  void sgd_step(std::span<const Example> batch, double learning_rate);

  ScorerModel to_model(const HashingParams& params) const;

 private:
  std::uint32_t dim_;
  std::vector<double> weights_;
  std::array<double, 4> bias_{};
};

// Micro-averaged accuracy of decide() over every present label; nullopt when
// no example carries a label.
std::optional<double> label_accuracy(const ScorerModel& model, std::span<const Example> examples);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double learning_rate = 0.0;
  double train_loss = 0.0;  // full training loss after the epoch
  double val_accuracy = 0.0;
  bool improved = false;
};

struct TrainResult {
  ScorerModel best;
  ScorerModel last;
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
  std::vector<EpochRecord> history;
};

// Mini-batch SGD without momentum. Epoch order comes from one SeededRng
// seeded with config.seed; the result is bit-identical for identical inputs.
TrainResult train_baseline(const std::vector<Post>& train, const std::vector<Post>& val,
                           const TrainConfig& config, Log* log = nullptr);

}  // namespace claimcheck::classifier
