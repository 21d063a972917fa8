#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/post.hpp"

namespace claimcheck::corpus {

// Names the columns of a tab-separated dataset file. Label columns are
// optional: when absent from the header the corresponding label is unset.
struct DatasetFormat {
  std::string id_column = "id";
  std::string text_column = "text";
  std::string language_column = "language";
  // Used for every row when the language column is absent (single-language
  // files such as per-language CLEF releases).
  std::optional<std::string> fixed_language;
  std::string vfc_column = "vfc_label";
  std::string harmful_column = "harmful_label";
  // Stamped on every post; defaults to the file stem.
  std::string source;
};

std::vector<Post> load_dataset(const std::filesystem::path& path, const DatasetFormat& format = {});

// Same as load_dataset but over in-memory content; `origin` names the input
// in error messages and is the default source.
std::vector<Post> parse_dataset(std::string_view content, const DatasetFormat& format,
                                std::string_view origin);

enum class Fold { train, val, test };

std::string_view fold_name(Fold fold);
Fold parse_fold(std::string_view name);

struct Collection {
  std::string id;
  std::vector<Post> posts;
  std::map<std::string, Fold> split_assignment;

  std::vector<Post> fold(Fold f) const;
  std::size_t fold_size(Fold f) const;
};

// Canonical TSV: id, text, language, vfc_label, harmful_label and, when any
// assignment exists, split.
std::string format_collection(const Collection& collection);
void write_collection(const Collection& collection, const std::filesystem::path& path);

// Reads the canonical TSV (split column optional).
Collection load_collection(const std::filesystem::path& path);
Collection parse_collection(std::string_view content, std::string_view origin);

// Throws DuplicateIdError listing every id that occurs more than once.
void check_unique_ids(const std::vector<Post>& posts, std::string_view context);

}  // namespace claimcheck::corpus
