#include "claimcheck/corpus/recipe.hpp"

#include <algorithm>
#include <future>
#include <memory>
#include <set>

#include <json.hpp>

#include "claimcheck/error.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/preprocess/pipeline.hpp"
#include "claimcheck/preprocess/translate.hpp"

namespace claimcheck::corpus {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("recipe: " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing '") + key + "'");
  return obj.at(key);
}

std::string get_string(const json& value, const std::string& where) {
  if (!value.is_string()) fail(where, "expected a string");
  return value.get<std::string>();
}

std::size_t get_count(const json& value, const std::string& where) {
  if (!value.is_number_unsigned()) fail(where, "expected a non-negative integer");
  return value.get<std::size_t>();
}

bool get_binary_label(const json& value, const std::string& where) {
  if (value.is_number_integer()) {
    const auto v = value.get<long long>();
    if (v == 0 || v == 1) return v == 1;
  }
  fail(where, "label value must be 0 or 1");
}

// {"vfc": 0} -> (Task::vfc, false)
std::pair<Task, bool> parse_task_value(const json& value, const std::string& where) {
  if (!value.is_object() || value.size() != 1) fail(where, "expected an object like {\"vfc\": 1}");
  const auto& [key, v] = *value.items().begin();
  try {
    return {parse_task(key), get_binary_label(v, where)};
  } catch (const ConfigError& e) {
    fail(where, e.what());
  }
}

DatasetFormat parse_format(const json& value, const std::string& where) {
  DatasetFormat format;
  if (value.is_null()) return format;
  if (!value.is_object()) fail(where, "format must be an object");
  for (const auto& [key, v] : value.items()) {
    const auto here = where + ".format." + key;
    if (key == "id") format.id_column = get_string(v, here);
    else if (key == "text") format.text_column = get_string(v, here);
    else if (key == "language") format.language_column = get_string(v, here);
    else if (key == "fixed_language") format.fixed_language = get_string(v, here);
    else if (key == "vfc") format.vfc_column = get_string(v, here);
    else if (key == "harmful") format.harmful_column = get_string(v, here);
    else fail(here, "unknown format key");
  }
  return format;
}

Selector parse_selector(const json& value, const std::string& where) {
  if (!value.is_object() || value.size() != 1) {
    fail(where, "selector must be an object with one of 'language', 'label', 'force'");
  }
  const auto& [key, v] = *value.items().begin();
  Selector sel;
  if (key == "language") {
    sel.kind = Selector::Kind::language;
    if (v.is_string()) {
      sel.languages.push_back(v.get<std::string>());
    } else if (v.is_array()) {
      for (const auto& lang : v) sel.languages.push_back(get_string(lang, where + ".language"));
    } else {
      fail(where, "language selector expects a string or a list");
    }
    for (const auto& lang : sel.languages) {
      if (!is_valid_language_tag(lang)) fail(where, "invalid language tag '" + lang + "'");
    }
  } else if (key == "label" || key == "force") {
    sel.kind = key == "label" ? Selector::Kind::label : Selector::Kind::force;
    std::tie(sel.task, sel.value) = parse_task_value(v, where + "." + key);
  } else {
    fail(where, "unknown selector '" + key + "'");
  }
  return sel;
}

preprocess::PreprocessConfig parse_preprocess(const json& v, const std::string& where) {
  preprocess::PreprocessConfig cfg;
  if (v.is_number_integer()) {
    cfg.method = v.get<int>();
  } else if (v.is_object()) {
    for (const auto& [key, x] : v.items()) {
      const auto here = where + "." + key;
      if (key == "method") cfg.method = static_cast<int>(get_count(x, here));
      else if (key == "min_len") cfg.min_len_chars = get_count(x, here);
      else if (key == "max_len") cfg.max_len_chars = get_count(x, here);
      else if (key == "min_nondigit") cfg.min_nondigit_chars = get_count(x, here);
      else if (key == "scripts") cfg.alphabet_whitelist = preprocess::ScriptSet::parse(get_string(x, here));
      else fail(here, "unknown preprocess option");
    }
  } else {
    fail(where, "preprocess expects a method number or an object");
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    fail(where, e.what());
  }
  return cfg;
}

TransformSpec parse_transform(const json& value, const std::string& where,
                              const std::filesystem::path& base_dir) {
  TransformSpec t;
  std::string name;
  const json* args = nullptr;
  if (value.is_string()) {
    name = value.get<std::string>();
  } else if (value.is_object() && value.size() == 1) {
    name = value.items().begin().key();
    args = &value.items().begin().value();
  } else {
    fail(where, "transform must be a name or an object with one key");
  }
  try {
    t.kind = parse_transform_kind(name);
  } catch (const ConfigError& e) {
    fail(where, e.what());
  }
  const auto here = where + "." + name;
  switch (t.kind) {
    case TransformSpec::Kind::aggregate_triplets:
      break;
    case TransformSpec::Kind::alphabet_filter:
      if (args != nullptr) {
        const auto& scripts = args->is_object() ? require(*args, "scripts", here) : *args;
        t.whitelist = preprocess::ScriptSet::parse(get_string(scripts, here));
      }
      break;
    case TransformSpec::Kind::preprocess:
      if (args == nullptr) fail(here, "preprocess needs a method");
      t.preprocess = parse_preprocess(*args, here);
      break;
    case TransformSpec::Kind::translate:
      if (args == nullptr) fail(here, "translate needs a target language");
      if (args->is_string()) {
        t.target_language = args->get<std::string>();
      } else {
        t.target_language = get_string(require(*args, "target", here), here + ".target");
        if (args->contains("translator")) t.translator = get_string(args->at("translator"), here);
        if (args->contains("dictionary")) {
          t.dictionary = base_dir / get_string(args->at("dictionary"), here + ".dictionary");
        }
      }
      if (!is_valid_language_tag(t.target_language)) fail(here, "invalid target language");
      if (t.translator != "identity" && t.translator != "dictionary") {
        fail(here, "unknown translator '" + t.translator + "'");
      }
      if (t.translator == "dictionary" && t.dictionary.empty()) {
        fail(here, "dictionary translator needs a 'dictionary' path");
      }
      break;
  }
  return t;
}

std::vector<TransformSpec> parse_transforms(const json& value, const std::string& where,
                                            const std::filesystem::path& base_dir) {
  std::vector<TransformSpec> out;
  if (value.is_null()) return out;
  if (!value.is_array()) fail(where, "transforms must be a list");
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(parse_transform(value[i], where + "[" + std::to_string(i) + "]", base_dir));
  }
  return out;
}

SplitSpec parse_split(const json& value) {
  const std::string where = "split";
  SplitSpec spec;
  spec.mode = parse_split_mode(get_string(require(value, "mode", where), where + ".mode"));
  if (value.contains("seed")) spec.seed = value.at("seed").get<std::uint64_t>();
  if (value.contains("stratify")) {
    if (!value.at("stratify").is_boolean()) fail(where, "stratify must be a boolean");
    spec.stratify = value.at("stratify").get<bool>();
  }
  if (spec.mode == SplitSpec::Mode::explicit_counts) {
    const auto& counts = require(value, "counts", where);
    if (!counts.is_array() || counts.size() != 3) fail(where, "counts must be [train, val, test]");
    for (std::size_t f = 0; f < 3; ++f) spec.counts[f] = get_count(counts[f], where + ".counts");
  } else {
    const auto& fractions = require(value, "fractions", where);
    if (!fractions.is_array() || fractions.size() != 3 ||
        !std::all_of(fractions.begin(), fractions.end(), [](const json& f) { return f.is_number(); })) {
      fail(where, "fractions must be three numbers");
    }
    for (std::size_t f = 0; f < 3; ++f) spec.fractions[f] = fractions[f].get<double>();
  }
  return spec;
}

std::vector<Post> apply_selector(const Selector& sel, std::vector<Post> posts) {
  switch (sel.kind) {
    case Selector::Kind::language:
      std::erase_if(posts, [&](const Post& p) {
        return std::find(sel.languages.begin(), sel.languages.end(), p.language) == sel.languages.end();
      });
      break;
    case Selector::Kind::label:
      std::erase_if(posts, [&](const Post& p) { return p.labels.get(sel.task) != sel.value; });
      break;
    case Selector::Kind::force:
      for (auto& p : posts) p.labels.get(sel.task) = sel.value;
      break;
  }
  return posts;
}

std::unique_ptr<preprocess::Translator> make_translator(const TransformSpec& t) {
  if (t.translator == "dictionary") {
    return std::make_unique<preprocess::DictionaryTranslator>(preprocess::DictionaryTranslator::load(t.dictionary));
  }
  return std::make_unique<preprocess::IdentityTranslator>();
}

std::vector<Post> apply_transform(const TransformSpec& t, std::vector<Post> posts, Log* log) {
  switch (t.kind) {
    case TransformSpec::Kind::aggregate_triplets:
      return aggregate_triplets(posts);
    case TransformSpec::Kind::alphabet_filter:
      std::erase_if(posts, [&](const Post& p) { return !preprocess::alphabet_keep(p.text, t.whitelist); });
      return posts;
    case TransformSpec::Kind::preprocess:
      return preprocess::preprocess(posts, t.preprocess, preprocess::default_cleaner(), log);
    case TransformSpec::Kind::translate:
      return preprocess::translate_posts(posts, *make_translator(t), t.target_language);
  }
  return posts;
}

void check_no_duplicate_transforms(const std::vector<TransformSpec>& transforms, const std::string& where) {
  std::set<TransformSpec::Kind> seen;
  for (const auto& t : transforms) {
    if (!seen.insert(t.kind).second) {
      throw ConfigError("recipe: " + where + ": transform '" + std::string(t.name()) + "' listed twice");
    }
  }
}

}  // namespace

std::string Selector::describe() const {
  switch (kind) {
    case Kind::language: {
      std::string out = "language in [";
      for (std::size_t i = 0; i < languages.size(); ++i) out += (i ? "," : "") + languages[i];
      return out + "]";
    }
    case Kind::label:
      return "label " + std::string(task_name(task)) + "=" + (value ? "1" : "0");
    case Kind::force:
      return "force " + std::string(task_name(task)) + "=" + (value ? "1" : "0");
  }
  return {};
}

std::string_view TransformSpec::name() const {
  switch (kind) {
    case Kind::aggregate_triplets: return "aggregate_triplets";
    case Kind::alphabet_filter: return "alphabet_filter";
    case Kind::preprocess: return "preprocess";
    case Kind::translate: return "translate";
  }
  return {};
}

TransformSpec::Kind parse_transform_kind(std::string_view name) {
  if (name == "aggregate_triplets") return TransformSpec::Kind::aggregate_triplets;
  if (name == "alphabet_filter") return TransformSpec::Kind::alphabet_filter;
  if (name == "preprocess") return TransformSpec::Kind::preprocess;
  if (name == "translate") return TransformSpec::Kind::translate;
  throw ConfigError("unknown transform '" + std::string(name) + "'");
}

CollectionRecipe CollectionRecipe::parse(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("recipe: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("<root>", "expected an object");

  CollectionRecipe recipe;
  const auto& version = require(doc, "recipe_version", "<root>");
  if (!version.is_number_integer()) fail("recipe_version", "expected an integer");
  recipe.recipe_version = version.get<int>();
  if (recipe.recipe_version != kRecipeVersion) {
    fail("recipe_version", "unsupported version " + std::to_string(recipe.recipe_version) +
                               " (supported: " + std::to_string(kRecipeVersion) + ")");
  }
  recipe.id = get_string(require(doc, "id", "<root>"), "id");

  const auto& sources = require(doc, "sources", "<root>");
  if (!sources.is_array() || sources.empty()) fail("sources", "expected a non-empty list");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto where = "sources[" + std::to_string(i) + "]";
    const auto& s = sources[i];
    SourceSpec src;
    src.id = get_string(require(s, "id", where), where + ".id");
    src.path = base_dir / get_string(require(s, "path", where), where + ".path");
    if (s.contains("format")) src.format = parse_format(s.at("format"), where);
    src.format.source = src.id;
    if (s.contains("id_prefix")) src.id_prefix = get_string(s.at("id_prefix"), where + ".id_prefix");
    if (s.contains("select")) {
      const auto& select = s.at("select");
      if (!select.is_array()) fail(where + ".select", "expected a list");
      for (std::size_t k = 0; k < select.size(); ++k) {
        src.selectors.push_back(parse_selector(select[k], where + ".select[" + std::to_string(k) + "]"));
      }
    }
    if (s.contains("transforms")) src.transforms = parse_transforms(s.at("transforms"), where + ".transforms", base_dir);
    for (const auto& [key, unused] : s.items()) {
      static const std::set<std::string> known{"id", "path", "format", "id_prefix", "select", "transforms"};
      if (!known.contains(key)) fail(where, "unknown key '" + key + "'");
    }
    recipe.sources.push_back(std::move(src));
  }
  if (doc.contains("transforms")) recipe.transforms = parse_transforms(doc.at("transforms"), "transforms", base_dir);
  if (doc.contains("split") && !doc.at("split").is_null()) recipe.split = parse_split(doc.at("split"));
  for (const auto& [key, unused] : doc.items()) {
    static const std::set<std::string> known{"recipe_version", "id", "sources", "transforms", "split", "description"};
    if (!known.contains(key)) fail("<root>", "unknown key '" + key + "'");
  }
  recipe.validate();
  return recipe;
}

CollectionRecipe CollectionRecipe::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.parent_path());
}

void CollectionRecipe::validate() const {
  std::set<std::string> ids;
  for (const auto& src : sources) {
    if (!ids.insert(src.id).second) throw ConfigError("recipe: duplicate source id '" + src.id + "'");
    check_no_duplicate_transforms(src.transforms, "source '" + src.id + "'");
  }
  check_no_duplicate_transforms(transforms, "collection");
}

std::map<std::string, std::vector<Post>> load_sources(const CollectionRecipe& recipe) {
  std::vector<std::future<std::vector<Post>>> pending;
  pending.reserve(recipe.sources.size());
  for (const auto& src : recipe.sources) {
    pending.push_back(std::async(std::launch::async, [&src] { return load_dataset(src.path, src.format); }));
  }
  std::map<std::string, std::vector<Post>> out;
  for (std::size_t i = 0; i < pending.size(); ++i) out.emplace(recipe.sources[i].id, pending[i].get());
  return out;
}

Collection compose_collection(const CollectionRecipe& recipe,
                              const std::map<std::string, std::vector<Post>>& datasets, Log* log) {
  recipe.validate();
  Collection collection;
  collection.id = recipe.id;

  for (const auto& src : recipe.sources) {
    auto it = datasets.find(src.id);
    if (it == datasets.end()) throw ConfigError("recipe: source '" + src.id + "' was not loaded");
    std::vector<Post> posts = it->second;
    if (posts.empty() && log != nullptr) log->warn("empty_dataset", {{"source", src.id}});
    for (auto& p : posts) {
      p.id = src.id_prefix + p.id;
      p.source = src.id;
    }
    for (const auto& sel : src.selectors) {
      const bool had_posts = !posts.empty();
      posts = apply_selector(sel, std::move(posts));
      if (log != nullptr && (posts.empty() && (had_posts || sel.kind == Selector::Kind::force))) {
        log->warn("selector_zero_match", {{"source", src.id}, {"selector", sel.describe()}});
      }
    }
    for (const auto& t : src.transforms) posts = apply_transform(t, std::move(posts), log);
    if (log != nullptr) {
      log->info("source_composed", {{"source", src.id},
                                    {"input", std::to_string(it->second.size())},
                                    {"output", std::to_string(posts.size())}});
    }
    collection.posts.insert(collection.posts.end(), std::make_move_iterator(posts.begin()),
                            std::make_move_iterator(posts.end()));
  }
  for (const auto& t : recipe.transforms) collection.posts = apply_transform(t, std::move(collection.posts), log);

  check_unique_ids(collection.posts, "collection '" + recipe.id + "'");
  if (recipe.split) collection.split_assignment = assign_folds(collection.posts, *recipe.split);
  return collection;
}

std::vector<Post> aggregate_triplets(const std::vector<Post>& posts) {
  for (const auto& p : posts) {
    if (p.labels != posts.front().labels) {
      throw ConfigError("aggregate_triplets: mixed labels (post '" + p.id + "' differs from '" +
                        posts.front().id + "')");
    }
  }
  std::vector<Post> out;
  out.reserve((posts.size() + 2) / 3);
  for (std::size_t i = 0; i < posts.size(); i += 3) {
    const std::size_t end = std::min(i + 3, posts.size());
    Post agg = posts[i];
    agg.id += "+agg";
    for (std::size_t k = i + 1; k < end; ++k) {
      agg.text += ' ';
      agg.text += posts[k].text;
      if (posts[k].language != agg.language) agg.language = "und";
    }
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace claimcheck::corpus
