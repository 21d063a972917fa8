#include "claimcheck/classifier/predictions.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "claimcheck/error.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/unicode.hpp"

namespace claimcheck::classifier {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 6> kKnownKeys{"id", "vfc_pos", "vfc_neg", "harm_pos", "harm_neg", "model"};

std::string where(std::string_view origin, std::size_t line) {
  return std::string(origin) + ":" + std::to_string(line) + ": ";
}

// nullopt for "NA"; throws for anything else that is not a number in [0, 1].
std::optional<double> read_score(const json& value, std::string_view key, std::string_view origin, std::size_t line) {
  if (value.is_string() && value.get<std::string>() == "NA") return std::nullopt;
  if (!value.is_number()) {
    throw ParseError(where(origin, line) + "'" + std::string(key) + "' must be a number or \"NA\"", line);
  }
  const double v = value.get<double>();
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ParseError(where(origin, line) + "'" + std::string(key) + "' = " + value.dump() + " is outside [0, 1]",
                     line);
  }
  return v;
}

std::optional<ScorePair> read_pair(const json& record, std::string_view pos_key, std::string_view neg_key,
                                   std::string_view origin, std::size_t line) {
  const bool has_pos = record.contains(pos_key);
  const bool has_neg = record.contains(neg_key);
  if (!has_pos && !has_neg) return std::nullopt;
  if (has_pos != has_neg) {
    throw ParseError(where(origin, line) + "'" + std::string(pos_key) + "' and '" + std::string(neg_key) +
                         "' must appear together",
                     line);
  }
  const auto pos = read_score(record.at(pos_key), pos_key, origin, line);
  const auto neg = read_score(record.at(neg_key), neg_key, origin, line);
  if (pos.has_value() != neg.has_value()) {
    throw ParseError(where(origin, line) + "a score pair must be both numeric or both \"NA\"", line);
  }
  if (!pos) return std::nullopt;
  return ScorePair{*pos, *neg};
}

void append_score(std::string& out, double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

}  // namespace

void PredictionSet::add(std::string id, LabelVector vector) {
  if (scores.count(id) != 0) throw DuplicateIdError("duplicate prediction id '" + id + "'", {id});
  scores.emplace(id, vector);
  ids.push_back(std::move(id));
}

PredictionSet parse_predictions(std::string_view content, std::string_view origin) {
  PredictionSet set;
  bool model_seen = false;
  std::size_t line_no = 0;
  for (const auto& line : io::split_lines(content)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!unicode::is_valid_utf8(line)) throw ParseError(where(origin, line_no) + "invalid UTF-8", line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where(origin, line_no) + "malformed record: " + e.what(), line_no);
    }
    if (!record.is_object()) throw ParseError(where(origin, line_no) + "record must be a JSON object", line_no);
    for (const auto& [key, value] : record.items()) {
      bool known = false;
      for (auto k : kKnownKeys) known = known || key == k;
      if (!known) throw ParseError(where(origin, line_no) + "unknown key '" + key + "'", line_no);
    }
    if (!record.contains("id") || !record.at("id").is_string() || record.at("id").get<std::string>().empty()) {
      throw ParseError(where(origin, line_no) + "'id' must be a non-empty string", line_no);
    }
    LabelVector vector;
    vector.vfc = read_pair(record, "vfc_pos", "vfc_neg", origin, line_no);
    vector.harmful = read_pair(record, "harm_pos", "harm_neg", origin, line_no);
    if (!vector.vfc && !vector.harmful) {
      throw ParseError(where(origin, line_no) + "record scores no task", line_no);
    }
    if (record.contains("model")) {
      if (!record.at("model").is_string()) throw ParseError(where(origin, line_no) + "'model' must be a string", line_no);
      const auto name = record.at("model").get<std::string>();
      if (model_seen && name != set.model) {
        throw ParseError(where(origin, line_no) + "model '" + name + "' differs from '" + set.model + "'", line_no);
      }
      set.model = name;
      model_seen = true;
    }
    const auto id = record.at("id").get<std::string>();
    if (set.contains(id)) {
      throw DuplicateIdError(where(origin, line_no) + "duplicate prediction id '" + id + "'", {id});
    }
    set.add(id, vector);
  }
  return set;
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  return parse_predictions(io::read_file(path), path.string());
}

std::string format_prediction_line(std::string_view id, const LabelVector& vector, std::string_view model) {
  std::string out = "{\"id\":";
  out += json(std::string(id)).dump();
  auto pair = [&](std::string_view pos_key, std::string_view neg_key, const std::optional<ScorePair>& p) {
    out += ",\"";
    out += pos_key;
    out += "\":";
    if (p) {
      append_score(out, p->pos);
    } else {
      out += "\"NA\"";
    }
    out += ",\"";
    out += neg_key;
    out += "\":";
    if (p) {
      append_score(out, p->neg);
    } else {
      out += "\"NA\"";
    }
  };
  pair("vfc_pos", "vfc_neg", vector.vfc);
  pair("harm_pos", "harm_neg", vector.harmful);
  if (!model.empty()) {
    out += ",\"model\":";
    out += json(std::string(model)).dump();
  }
  out += '}';
  return out;
}

std::string format_predictions(const PredictionSet& set) {
  std::string out;
  for (const auto& id : set.ids) {
    out += format_prediction_line(id, set.at(id), set.model);
    out += '\n';
  }
  return out;
}

void write_predictions(const PredictionSet& set, const std::filesystem::path& path) {
  io::write_file_atomic(path, format_predictions(set));
}

PredictionSet predict(const ScorerModel& model, const std::vector<Post>& posts, std::string model_name) {
  PredictionSet set;
  set.model = std::move(model_name);
  for (const auto& post : posts) set.add(post.id, model.score(post.text));
  return set;
}

}  // namespace claimcheck::classifier
