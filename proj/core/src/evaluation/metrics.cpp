#include "claimcheck/evaluation/metrics.hpp"

#include "claimcheck/error.hpp"

namespace claimcheck::evaluation {
namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

std::map<std::string, bool> decisions_for(const classifier::PredictionSet& predictions,
                                          const std::vector<Post>& gold, Task task) {
  std::map<std::string, bool> decisions;
  std::vector<std::string> missing;
  for (const auto& post : gold) {
    if (!post.labels.get(task)) continue;
    auto it = predictions.scores.find(post.id);
    if (it == predictions.scores.end() || !it->second.get(task)) {
      missing.push_back(post.id);
      continue;
    }
    decisions[post.id] = classifier::decide_pair(*it->second.get(task));
  }
  if (!missing.empty()) {
    throw MissingPredictionError("no " + std::string(task_name(task)) + " prediction for gold id(s): " +
                                     join_ids(missing),
                                 missing);
  }
  return decisions;
}

}  // namespace

void Confusion::add(bool predicted, bool gold) {
  if (predicted && gold) {
    ++tp;
  } else if (predicted) {
    ++fp;
  } else if (gold) {
    ++fn;
  } else {
    ++tn;
  }
}

Confusion& Confusion::operator+=(const Confusion& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

Metrics Metrics::from(const Confusion& c) {
  Metrics m;
  m.counts = c;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return m;
}

EvalReport evaluate_decisions(const std::map<std::string, bool>& decisions, const std::vector<Post>& gold,
                              Task task) {
  std::vector<std::string> missing;
  Confusion overall;
  std::map<std::string, Confusion> by_language;
  for (const auto& post : gold) {
    const auto& label = post.labels.get(task);
    if (!label) continue;
    auto it = decisions.find(post.id);
    if (it == decisions.end()) {
      missing.push_back(post.id);
      continue;
    }
    overall.add(it->second, *label);
    by_language[post.language].add(it->second, *label);
  }
  if (!missing.empty()) {
    throw MissingPredictionError("no " + std::string(task_name(task)) + " prediction for gold id(s): " +
                                     join_ids(missing),
                                 missing);
  }
  EvalReport report;
  report.task = task;
  report.overall = Metrics::from(overall);
  for (const auto& [lang, counts] : by_language) report.per_language.emplace(lang, Metrics::from(counts));
  return report;
}

EvalReport evaluate(const classifier::PredictionSet& predictions, const std::vector<Post>& gold, Task task) {
  return evaluate_decisions(decisions_for(predictions, gold, task), gold, task);
}

std::map<std::string, bool> correctness(const classifier::PredictionSet& predictions,
                                        const std::vector<Post>& gold, Task task) {
  auto decisions = decisions_for(predictions, gold, task);
  std::map<std::string, bool> out;
  for (const auto& post : gold) {
    const auto& label = post.labels.get(task);
    if (label) out[post.id] = decisions.at(post.id) == *label;
  }
  return out;
}

ComparisonTable compare_report(const std::vector<std::pair<std::string, EvalReport>>& reports) {
  if (reports.size() < 2) throw ConfigError("comparison needs at least two reports");
  const std::size_t n = reports.front().second.overall.counts.total();
  const Task task = reports.front().second.task;
  for (const auto& [name, report] : reports) {
    if (report.overall.counts.total() != n) {
      throw ConfigError("report '" + name + "' covers " + std::to_string(report.overall.counts.total()) +
                        " items but '" + reports.front().first + "' covers " + std::to_string(n));
    }
    if (report.task != task) throw ConfigError("reports evaluate different tasks");
  }

  ComparisonTable table;
  table.task = task;
  for (const auto& [name, report] : reports) table.rows.push_back({name, report.overall});

  auto flag = [&](auto get, auto set) {
    std::optional<double> best;
    for (const auto& row : table.rows) {
      const auto v = get(row.metrics);
      if (v && (!best || *v > *best)) best = v;
    }
    if (!best) return;
    for (auto& row : table.rows) {
      const auto v = get(row.metrics);
      if (v && *v == *best) set(row);
    }
  };
  flag([](const Metrics& m) { return m.accuracy; }, [](ComparisonRow& r) { r.best_accuracy = true; });
  flag([](const Metrics& m) { return m.recall; }, [](ComparisonRow& r) { r.best_recall = true; });
  flag([](const Metrics& m) { return m.f1; }, [](ComparisonRow& r) { r.best_f1 = true; });
  return table;
}

}  // namespace claimcheck::evaluation
