#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "claimcheck/classifier/predictions.hpp"
#include "claimcheck/post.hpp"

namespace claimcheck::evaluation {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  void add(bool predicted, bool gold);
  Confusion& operator+=(const Confusion& other);

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// Undefined ratios (zero denominator) are nullopt, never 0.
struct Metrics {
  Confusion counts;
  std::optional<double> accuracy;
  std::optional<double> recall;
  std::optional<double> precision;
  // 2TP / (2TP + FP + FN), equal to 2PR / (P + R) wherever both are defined.
  std::optional<double> f1;

  static Metrics from(const Confusion& counts);
};

struct EvalReport {
  Task task = Task::vfc;
  Metrics overall;
  std::map<std::string, Metrics> per_language;
};

// Every gold post labeled for `task` needs a prediction carrying that task's
// pair; otherwise MissingPredictionError lists the uncovered ids. Predictions
// for ids outside the gold set are ignored.
EvalReport evaluate(const classifier::PredictionSet& predictions, const std::vector<Post>& gold, Task task);

// Same over already-decided outputs keyed by id.
EvalReport evaluate_decisions(const std::map<std::string, bool>& decisions, const std::vector<Post>& gold,
                              Task task);

// Per-id correctness (decision == gold) for posts labeled for `task`.
std::map<std::string, bool> correctness(const classifier::PredictionSet& predictions,
                                        const std::vector<Post>& gold, Task task);

struct ComparisonRow {
  std::string model;
  Metrics metrics;
  bool best_accuracy = false;
  bool best_recall = false;
  bool best_f1 = false;
};

struct ComparisonTable {
  Task task = Task::vfc;
  std::vector<ComparisonRow> rows;
};

// Needs at least two reports over test sets of equal size. Every row holding
// the column maximum is flagged, so ties flag several rows.
ComparisonTable compare_report(const std::vector<std::pair<std::string, EvalReport>>& reports);

}  // namespace claimcheck::evaluation
