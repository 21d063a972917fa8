#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/classifier/model.hpp"
#include "claimcheck/post.hpp"

namespace claimcheck::classifier {

// Scores keyed by post id. `ids` keeps file order.
struct PredictionSet {
  std::string model;
  std::vector<std::string> ids;
  std::map<std::string, LabelVector> scores;

  std::size_t size() const { return ids.size(); }
  bool contains(const std::string& id) const { return scores.count(id) != 0; }
  const LabelVector& at(const std::string& id) const { return scores.at(id); }

  // Throws DuplicateIdError.
  void add(std::string id, LabelVector vector);
};

// JSON Lines, one object per record, documented in docs/predictions-format.md.
// Throws ParseError (with line number) on malformed records or scores outside
// [0, 1], DuplicateIdError on repeated ids.
PredictionSet parse_predictions(std::string_view content, std::string_view origin);
PredictionSet load_predictions(const std::filesystem::path& path);

std::string format_prediction_line(std::string_view id, const LabelVector& vector, std::string_view model = {});
std::string format_predictions(const PredictionSet& set);
void write_predictions(const PredictionSet& set, const std::filesystem::path& path);

PredictionSet predict(const ScorerModel& model, const std::vector<Post>& posts, std::string model_name);

}  // namespace claimcheck::classifier
