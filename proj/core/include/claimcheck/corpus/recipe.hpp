#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/corpus/dataset.hpp"
#include "claimcheck/corpus/split.hpp"
#include "claimcheck/log.hpp"
#include "claimcheck/preprocess/filters.hpp"

namespace claimcheck::corpus {

inline constexpr int kRecipeVersion = 1;

// One step of a source's selection chain.
struct Selector {
  enum class Kind {
    language,  // keep posts whose language is listed
    label,     // keep posts whose `task` label equals `value`
    force,     // set the `task` label to `value` on every post
  };

  Kind kind = Kind::language;
  std::vector<std::string> languages;
  Task task = Task::vfc;
  bool value = false;

  std::string describe() const;
};

struct TransformSpec {
  enum class Kind { aggregate_triplets, alphabet_filter, preprocess, translate };

  Kind kind = Kind::aggregate_triplets;
  preprocess::ScriptSet whitelist = preprocess::ScriptSet::defaults();  // alphabet_filter
  preprocess::PreprocessConfig preprocess;                              // preprocess
  std::string target_language = "en";                                  // translate
  std::string translator = "identity";                                  // "identity" | "dictionary"
  std::filesystem::path dictionary;                                     // translator = dictionary

  std::string_view name() const;
};

TransformSpec::Kind parse_transform_kind(std::string_view name);

struct SourceSpec {
  std::string id;
  std::filesystem::path path;
  DatasetFormat format;
  std::string id_prefix;
  std::vector<Selector> selectors;
  std::vector<TransformSpec> transforms;
};

// Declarative collection composition; see docs/recipe-format.md.
struct CollectionRecipe {
  int recipe_version = kRecipeVersion;
  std::string id;
  std::vector<SourceSpec> sources;
  std::vector<TransformSpec> transforms;
  std::optional<SplitSpec> split;

  // Relative source paths resolve against `base_dir`.
  static CollectionRecipe parse(std::string_view json, const std::filesystem::path& base_dir);
  static CollectionRecipe load(const std::filesystem::path& path);

  // Throws ConfigError on duplicate source ids or duplicate transforms.
  void validate() const;
};

// Loads every source (concurrently) keyed by source id.
std::map<std::string, std::vector<Post>> load_sources(const CollectionRecipe& recipe);

// Per source, in declared order: id prefix, selectors, source transforms.
// Then collection transforms, then the split when the recipe declares one.
// Zero-match selectors and empty sources are logged as warnings.
Collection compose_collection(const CollectionRecipe& recipe,
                              const std::map<std::string, std::vector<Post>>& datasets,
                              Log* log = nullptr);

// Groups of three consecutive posts become one post: texts joined by a
// single space, id = first id + "+agg". A trailing group of one or two is
// kept. All inputs must carry identical labels.
std::vector<Post> aggregate_triplets(const std::vector<Post>& posts);

}  // namespace claimcheck::corpus
