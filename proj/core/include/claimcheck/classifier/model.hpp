#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/classifier/features.hpp"
#include "claimcheck/post.hpp"

namespace claimcheck::classifier {

// Output order of the four-label head.
inline constexpr std::array<std::string_view, 4> kLabelNames{"vfc_pos", "vfc_neg", "harm_pos", "harm_neg"};

struct ScorePair {
  double pos = 0.0;
  double neg = 0.0;

  friend bool operator==(const ScorePair&, const ScorePair&) = default;
};

// Independent per-label sigmoid scores; a pair need not sum to one. A task
// pair is absent when the producer did not score that task.
struct LabelVector {
  std::optional<ScorePair> vfc;
  std::optional<ScorePair> harmful;

  static LabelVector from_array(const std::array<double, 4>& scores) {
    return {ScorePair{scores[0], scores[1]}, ScorePair{scores[2], scores[3]}};
  }
  const std::optional<ScorePair>& get(Task task) const { return task == Task::vfc ? vfc : harmful; }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;
};

struct Decision {
  std::optional<bool> vfc;
  std::optional<bool> harmful;

  const std::optional<bool>& get(Task task) const { return task == Task::vfc ? vfc : harmful; }

  friend bool operator==(const Decision&, const Decision&) = default;
};

// Positive iff pos >= neg: ties go to the positive class.
inline bool decide_pair(const ScorePair& pair) { return pair.pos >= pair.neg; }
Decision decide(const LabelVector& vector);

double sigmoid(double x);

// Hashed character n-gram linear model with a four-output sigmoid head.
// Weights are stored feature-major: weight(f, k) = weights()[f * 4 + k].
class ScorerModel {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  explicit ScorerModel(HashingParams params = {});

  const HashingParams& params() const { return params_; }
  std::span<float> weights() { return weights_; }
  std::span<const float> weights() const { return weights_; }
  std::array<float, 4>& bias() { return bias_; }
  const std::array<float, 4>& bias() const { return bias_; }
  std::vector<std::string>& label_names() { return label_names_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  float weight(std::uint32_t feature, std::size_t label) const { return weights_[feature * 4 + label]; }

  std::array<double, 4> logits(const SparseVector& features) const;
  LabelVector score(std::string_view text) const;
  LabelVector score_features(const SparseVector& features) const;

  // FNV-1a 64 over the serialized payload; identifies a model version.
  std::uint64_t fingerprint() const;

  // Throws ConfigError on bad params, a non-finite weight, or a bad label set.
  void validate() const;

  friend bool operator==(const ScorerModel&, const ScorerModel&) = default;

 private:
  HashingParams params_;
  std::vector<float> weights_;
  std::array<float, 4> bias_{};
  std::vector<std::string> label_names_;
};

inline LabelVector score(const ScorerModel& model, std::string_view text) { return model.score(text); }

// Binary model file; the layout is documented in docs/model-format.md.
std::string serialize_model(const ScorerModel& model);
ScorerModel deserialize_model(std::string_view bytes, std::string_view origin);
void save_model(const ScorerModel& model, const std::filesystem::path& path);
ScorerModel load_model(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace claimcheck::classifier
