#include "claimcheck/corpus/dataset.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "claimcheck/error.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/unicode.hpp"

namespace claimcheck::corpus {
namespace {

std::optional<std::size_t> find_column(const std::vector<std::string_view>& header,
                                       std::string_view name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t require_column(const std::vector<std::string_view>& header, std::string_view name,
                           std::string_view origin) {
  auto idx = find_column(header, name);
  if (!idx) {
    throw SchemaError(std::string(origin) + ": missing required column '" + std::string(name) + "'",
                      std::string(name));
  }
  return *idx;
}

std::optional<bool> parse_label(std::string_view cell, std::string_view column, std::size_t line,
                                std::string_view origin) {
  if (cell.empty()) return std::nullopt;
  if (cell == "0") return false;
  if (cell == "1") return true;
  throw ParseError(std::string(origin) + ":" + std::to_string(line) + ": column '" +
                       std::string(column) + "' must be 0 or 1, got '" + std::string(cell) + "'",
                   line);
}

std::string_view label_cell(const std::optional<bool>& label) {
  if (!label) return "";
  return *label ? "1" : "0";
}

struct Table {
  std::vector<std::string_view> header;
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;  // (line, fields)
};

Table parse_table(std::string_view content, std::string_view origin) {
  Table table;
  auto lines = io::split_lines(content);
  if (lines.empty()) {
    throw SchemaError(std::string(origin) + ": empty file (no header row)", "id");
  }
  table.header = io::split_tabs(lines[0]);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    if (!unicode::is_valid_utf8(lines[i])) {
      throw ParseError(std::string(origin) + ":" + std::to_string(line_no) + ": invalid UTF-8",
                       line_no);
    }
    auto fields = io::split_tabs(lines[i]);
    if (fields.size() != table.header.size()) {
      throw ParseError(std::string(origin) + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(table.header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    table.rows.emplace_back(line_no, std::move(fields));
  }
  return table;
}

std::string default_source(std::string_view origin) {
  return std::filesystem::path(std::string(origin)).stem().string();
}

}  // namespace

std::vector<Post> parse_dataset(std::string_view content, const DatasetFormat& format,
                                std::string_view origin) {
  const Table table = parse_table(content, origin);
  const auto& header = table.header;

  const auto id_col = require_column(header, format.id_column, origin);
  const auto text_col = require_column(header, format.text_column, origin);
  std::optional<std::size_t> lang_col;
  if (format.fixed_language) {
    if (!is_valid_language_tag(*format.fixed_language)) {
      throw ConfigError("invalid fixed language tag '" + *format.fixed_language + "'");
    }
    lang_col = find_column(header, format.language_column);
  } else {
    lang_col = require_column(header, format.language_column, origin);
  }
  const auto vfc_col = find_column(header, format.vfc_column);
  const auto harm_col = find_column(header, format.harmful_column);
  const std::string source = format.source.empty() ? default_source(origin) : format.source;

  std::vector<Post> posts;
  posts.reserve(table.rows.size());
  for (const auto& [line, fields] : table.rows) {
    Post post;
    post.id = io::unescape_field(fields[id_col]);
    if (post.id.empty()) {
      throw ParseError(std::string(origin) + ":" + std::to_string(line) + ": empty id", line);
    }
    post.text = io::unescape_field(fields[text_col]);
    post.language = lang_col ? std::string(fields[*lang_col]) : *format.fixed_language;
    if (!is_valid_language_tag(post.language)) {
      throw ParseError(std::string(origin) + ":" + std::to_string(line) + ": invalid language tag '" +
                           post.language + "'",
                       line);
    }
    post.source = source;
    if (vfc_col) post.labels.vfc = parse_label(fields[*vfc_col], format.vfc_column, line, origin);
    if (harm_col) {
      post.labels.harmful = parse_label(fields[*harm_col], format.harmful_column, line, origin);
    }
    posts.push_back(std::move(post));
  }
  check_unique_ids(posts, origin);
  return posts;
}

std::vector<Post> load_dataset(const std::filesystem::path& path, const DatasetFormat& format) {
  return parse_dataset(io::read_file(path), format, path.string());
}

void check_unique_ids(const std::vector<Post>& posts, std::string_view context) {
  std::unordered_map<std::string_view, int> seen;
  seen.reserve(posts.size());
  std::vector<std::string> duplicates;
  for (const auto& post : posts) {
    if (++seen[post.id] == 2) duplicates.push_back(post.id);
  }
  if (duplicates.empty()) return;
  std::string msg = std::string(context) + ": duplicate ids:";
  for (const auto& id : duplicates) msg += " " + id;
  throw DuplicateIdError(msg, std::move(duplicates));
}

std::string_view fold_name(Fold fold) {
  switch (fold) {
    case Fold::train: return "train";
    case Fold::val: return "val";
    case Fold::test: return "test";
  }
  return "train";
}

Fold parse_fold(std::string_view name) {
  if (name == "train") return Fold::train;
  if (name == "val" || name == "dev" || name == "validation") return Fold::val;
  if (name == "test") return Fold::test;
  throw ConfigError("unknown fold '" + std::string(name) + "' (expected train, val or test)");
}

std::vector<Post> Collection::fold(Fold f) const {
  std::vector<Post> out;
  for (const auto& post : posts) {
    auto it = split_assignment.find(post.id);
    if (it != split_assignment.end() && it->second == f) out.push_back(post);
  }
  return out;
}

std::size_t Collection::fold_size(Fold f) const {
  return static_cast<std::size_t>(std::count_if(
      split_assignment.begin(), split_assignment.end(), [f](const auto& kv) { return kv.second == f; }));
}

std::string format_collection(const Collection& collection) {
  const bool with_split = !collection.split_assignment.empty();
  std::string out = "id\ttext\tlanguage\tvfc_label\tharmful_label";
  if (with_split) out += "\tsplit";
  out += '\n';
  for (const auto& post : collection.posts) {
    out += io::escape_field(post.id);
    out += '\t';
    out += io::escape_field(post.text);
    out += '\t';
    out += post.language;
    out += '\t';
    out += label_cell(post.labels.vfc);
    out += '\t';
    out += label_cell(post.labels.harmful);
    if (with_split) {
      out += '\t';
      auto it = collection.split_assignment.find(post.id);
      if (it != collection.split_assignment.end()) out += fold_name(it->second);
    }
    out += '\n';
  }
  return out;
}

void write_collection(const Collection& collection, const std::filesystem::path& path) {
  io::write_file_atomic(path, format_collection(collection));
}

Collection parse_collection(std::string_view content, std::string_view origin) {
  Collection collection;
  collection.id = default_source(origin);
  collection.posts = parse_dataset(content, DatasetFormat{}, origin);

  const Table table = parse_table(content, origin);
  const auto split_col = find_column(table.header, "split");
  if (!split_col) return collection;
  const auto id_col = *find_column(table.header, "id");
  for (const auto& [line, fields] : table.rows) {
    const auto cell = fields[*split_col];
    if (cell.empty()) continue;
    try {
      collection.split_assignment.emplace(io::unescape_field(fields[id_col]), parse_fold(cell));
    } catch (const ConfigError& e) {
      throw ParseError(std::string(origin) + ":" + std::to_string(line) + ": " + e.what(), line);
    }
  }
  return collection;
}

Collection load_collection(const std::filesystem::path& path) {
  return parse_collection(io::read_file(path), path.string());
}

}  // namespace claimcheck::corpus
