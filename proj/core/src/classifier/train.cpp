#include "claimcheck/classifier/train.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "claimcheck/error.hpp"
#include "claimcheck/random.hpp"

namespace claimcheck::classifier {
namespace {

// Targets and mask for the four outputs of one example.
struct Targets {
  std::array<double, 4> value{};
  std::array<bool, 4> present{};
};

Targets targets_of(const TaskLabels& labels) {
  Targets t;
  if (labels.vfc) {
    t.value[0] = *labels.vfc ? 1.0 : 0.0;
    t.value[1] = 1.0 - t.value[0];
    t.present[0] = t.present[1] = true;
  }
  if (labels.harmful) {
    t.value[2] = *labels.harmful ? 1.0 : 0.0;
    t.value[3] = 1.0 - t.value[2];
    t.present[2] = t.present[3] = true;
  }
  return t;
}

// log(1 + e^z) - t z without overflow.
double bce_with_logit(double z, double t) {
  return std::max(z, 0.0) - t * z + std::log1p(std::exp(-std::abs(z)));
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be positive");
  }
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  if (!(anneal_factor > 0.0 && anneal_factor < 1.0)) {
    throw ConfigError("anneal factor must lie in (0, 1)");
  }
  if (max_epochs == 0) throw ConfigError("max_epochs must be at least 1");
  hashing.validate();
}

PlateauScheduler::PlateauScheduler(double learning_rate, double factor, std::size_t patience)
    : lr_(learning_rate), factor_(factor), patience_(patience) {}

bool PlateauScheduler::step(double metric) {
  if (!best_ || metric > *best_) {
    best_ = metric;
    bad_epochs_ = 0;
    return true;
  }
  ++bad_epochs_;
  if (bad_epochs_ >= patience_) {
    lr_ *= factor_;
    bad_epochs_ = 0;
  }
  return false;
}

Example make_example(const Post& post, const HashingParams& params) {
  return {featurize(post.text, params), post.labels};
}

LinearHead::LinearHead(std::uint32_t dim) : dim_(dim), weights_(static_cast<std::size_t>(dim) * 4, 0.0) {}

std::array<double, 4> LinearHead::logits(const SparseVector& x) const {
  std::array<double, 4> z = bias_;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double* row = &weights_[static_cast<std::size_t>(x.indices[i]) * 4];
    for (std::size_t k = 0; k < 4; ++k) z[k] += x.values[i] * row[k];
  }
  return z;
}

double LinearHead::loss(std::span<const Example> batch) const {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : batch) {
    const auto z = logits(ex.features);
    const auto t = targets_of(ex.labels);
    for (std::size_t k = 0; k < 4; ++k) {
      if (t.present[k]) total += bce_with_logit(z[k], t.value[k]);
    }
  }
  return total / static_cast<double>(batch.size());
}

void LinearHead::gradient(std::span<const Example> batch, std::vector<double>& grad_w,
                          std::array<double, 4>& grad_b) const {
  grad_w.assign(weights_.size(), 0.0);
  grad_b.fill(0.0);
  if (batch.empty()) return;
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) {
    const auto z = logits(ex.features);
    const auto t = targets_of(ex.labels);
    for (std::size_t k = 0; k < 4; ++k) {
      if (!t.present[k]) continue;
      const double r = (sigmoid(z[k]) - t.value[k]) * scale;
      grad_b[k] += r;
      for (std::size_t i = 0; i < ex.features.size(); ++i) {
        grad_w[static_cast<std::size_t>(ex.features.indices[i]) * 4 + k] += r * ex.features.values[i];
      }
    }
  }
}

void LinearHead::sgd_step(std::span<const Example> batch, double learning_rate) {
  if (batch.empty()) return;
  // All residuals are taken at the pre-step weights.
  const double scale = learning_rate / static_cast<double>(batch.size());
  std::vector<std::array<double, 4>> residuals(batch.size());
  for (std::size_t e = 0; e < batch.size(); ++e) {
    const auto z = logits(batch[e].features);
    const auto t = targets_of(batch[e].labels);
    for (std::size_t k = 0; k < 4; ++k) {
      residuals[e][k] = t.present[k] ? (sigmoid(z[k]) - t.value[k]) * scale : 0.0;
    }
  }
  for (std::size_t e = 0; e < batch.size(); ++e) {
    const auto& x = batch[e].features;
    const auto& r = residuals[e];
    for (std::size_t k = 0; k < 4; ++k) bias_[k] -= r[k];
    for (std::size_t i = 0; i < x.size(); ++i) {
      double* row = &weights_[static_cast<std::size_t>(x.indices[i]) * 4];
      for (std::size_t k = 0; k < 4; ++k) row[k] -= r[k] * x.values[i];
    }
  }
}

ScorerModel LinearHead::to_model(const HashingParams& params) const {
  ScorerModel model(params);
  if (params.dim != dim_) throw ConfigError("head dimension does not match hashing params");
  auto w = model.weights();
  for (std::size_t i = 0; i < weights_.size(); ++i) w[i] = static_cast<float>(weights_[i]);
  for (std::size_t k = 0; k < 4; ++k) model.bias()[k] = static_cast<float>(bias_[k]);
  return model;
}

std::optional<double> label_accuracy(const ScorerModel& model, std::span<const Example> examples) {
  std::size_t correct = 0;
  std::size_t total = 0;
  for (const auto& ex : examples) {
    if (!ex.labels.any()) continue;
    const auto decision = decide(model.score_features(ex.features));
    for (Task task : kTasks) {
      const auto& gold = ex.labels.get(task);
      if (!gold) continue;
      ++total;
      if (*decision.get(task) == *gold) ++correct;
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

TrainResult train_baseline(const std::vector<Post>& train, const std::vector<Post>& val,
                           const TrainConfig& config, Log* log) {
  config.validate();
  if (train.empty()) throw ConfigError("training set is empty");
  if (val.empty()) throw ConfigError("validation set is empty");
  for (const auto* set : {&train, &val}) {
    for (const auto& post : *set) {
      if (!post.labels.any()) throw ConfigError("post '" + post.id + "' carries no task label");
    }
  }

  std::vector<Example> train_ex;
  std::vector<Example> val_ex;
  train_ex.reserve(train.size());
  val_ex.reserve(val.size());
  for (const auto& p : train) train_ex.push_back(make_example(p, config.hashing));
  for (const auto& p : val) val_ex.push_back(make_example(p, config.hashing));

  LinearHead head(config.hashing.dim);
  PlateauScheduler scheduler(config.learning_rate, config.anneal_factor, config.patience);
  SeededRng rng(config.seed);
  std::vector<std::size_t> order(train_ex.size());
  std::vector<Example> batch;
  batch.reserve(config.batch_size);

  TrainResult result{ScorerModel(config.hashing), ScorerModel(config.hashing), 0, 0.0, {}};
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const double lr = scheduler.learning_rate();
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      batch.clear();
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_ex[order[i]]);
      head.sgd_step(batch, lr);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.learning_rate = lr;
    record.train_loss = head.loss(train_ex);
    ScorerModel current = head.to_model(config.hashing);
    record.val_accuracy = label_accuracy(current, val_ex).value_or(0.0);
    record.improved = scheduler.step(record.val_accuracy);
    if (record.improved) {
      result.best = current;
      result.best_epoch = epoch;
      result.best_val_accuracy = record.val_accuracy;
    }
    if (epoch == config.max_epochs) result.last = std::move(current);
    if (log != nullptr) {
      log->info("epoch", {{"epoch", std::to_string(epoch)},
                          {"lr", format_double(lr)},
                          {"train_loss", format_double(record.train_loss)},
                          {"val_accuracy", format_double(record.val_accuracy)},
                          {"improved", record.improved ? "true" : "false"}});
    }
    result.history.push_back(record);
  }
  return result;
}

}  // namespace claimcheck::classifier
