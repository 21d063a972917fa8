#include "claimcheck/cli/cli.hpp"

#include <chrono>
#include <csignal>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "claimcheck/bench/bench.hpp"
#include "claimcheck/classifier/predictions.hpp"
#include "claimcheck/classifier/train.hpp"
#include "claimcheck/corpus/dataset.hpp"
#include "claimcheck/corpus/recipe.hpp"
#include "claimcheck/corpus/reference_counts.hpp"
#include "claimcheck/corpus/split.hpp"
#include "claimcheck/error.hpp"
#include "claimcheck/evaluation/length_analysis.hpp"
#include "claimcheck/evaluation/mcnemar.hpp"
#include "claimcheck/evaluation/metrics.hpp"
#include "claimcheck/evaluation/report_format.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/log.hpp"
#include "claimcheck/preprocess/pipeline.hpp"
#include "claimcheck/service/service.hpp"
#include "claimcheck/version.hpp"

namespace claimcheck::cli {
namespace {

namespace fs = std::filesystem;
using corpus::Fold;
using nlohmann::ordered_json;

// Flag combinations the parser cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string log_level = "info";
  std::string manifest;

  // ingest
  std::string ingest_input, ingest_out, ingest_source, ingest_language;
  std::string id_col = "id", text_col = "text", lang_col = "language", vfc_col = "vfc_label",
              harmful_col = "harmful_label";

  // preprocess
  std::string pre_input, pre_out, pre_scripts = "Latin,Cyrillic,Arabic";
  int pre_method = 1;
  std::size_t pre_min_len = 15, pre_max_len = 500, pre_min_nondigit = 30;
  bool pre_keep_social = false, pre_keep_duplicates = false;

  // compose
  std::string recipe, compose_out;

  // split
  std::string split_input, split_out;
  std::vector<std::size_t> split_counts;
  std::vector<double> split_fractions;
  std::uint64_t split_seed = 0;
  bool stratify = false, no_stratify = false;

  // train
  std::string train_input, train_file, val_file, train_out_dir;
  double lr = 0.1, anneal = 0.5;
  std::size_t batch_size = 32, patience = 3, epochs = 15;
  std::uint64_t train_seed = 0;
  std::uint32_t min_n = 1, max_n = 5, dim = 1u << 18, hash_seed = 0;
  bool no_sentinels = false;

  // predict
  std::string predict_model, predict_input, predict_out, predict_fold, predict_name;
  bool predict_clean = false;

  // evaluate
  std::vector<std::string> eval_preds, eval_names;
  std::string eval_gold, eval_fold, eval_task = "vfc", eval_format = "table", eval_out;

  // mcnemar
  std::string mc_pred_a, mc_pred_b, mc_gold, mc_fold, mc_task = "vfc", mc_method = "auto", mc_format = "table",
                                                      mc_out;
  double mc_alpha = 0.05;

  // length-analysis
  std::string len_pred, len_gold, len_fold, len_task = "vfc", len_format = "table", len_out;

  // bench
  std::string bench_model, bench_corpus, bench_label = "baseline", bench_format = "table", bench_out;
  std::vector<std::size_t> bench_counts{100, 1000, 2000};
  std::size_t bench_warmup = 1, bench_warmup_size = 100, bench_repeats = 1, bench_threads = 1, synth_size = 2000;
  std::uint64_t synth_seed = 0;
  double human_seconds = bench::kHumanSecondsPerPost;

  // serve
  std::string serve_host = "127.0.0.1", serve_model;
  int serve_port = 8080;
  std::size_t max_batch = 256, max_text_chars = 10000;

  // verify-counts
  std::string verify_input, verify_preset, verify_file, verify_format = "table", verify_out;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  Log& log;
  CLI::App* command = nullptr;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<std::uint64_t> seed;
  // Default manifest location; empty means "log it".
  std::string manifest_path;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<Fold> optional_fold(const std::string& name) {
  if (name.empty()) return std::nullopt;
  return corpus::parse_fold(name);
}

std::vector<Post> posts_of(const corpus::Collection& collection, const std::optional<Fold>& fold) {
  if (!fold) return collection.posts;
  if (collection.split_assignment.empty()) {
    throw ConfigError("--fold " + std::string(corpus::fold_name(*fold)) + " needs a collection with a split column");
  }
  return collection.fold(*fold);
}

// Writes to `path` atomically, or to stdout when empty.
void emit(Context& ctx, const std::string& path, const std::string& content) {
  if (path.empty()) {
    ctx.out << content;
    ctx.out.flush();
  } else {
    io::write_file_atomic(path, content);
    ctx.outputs.push_back(path);
  }
}

void set_output(Context& ctx, const std::string& path) {
  if (!path.empty()) ctx.manifest_path = path + ".manifest.json";
}

// ---------------------------------------------------------------- commands

void cmd_ingest(const Options& o, Context& ctx) {
  corpus::DatasetFormat format;
  format.id_column = o.id_col;
  format.text_column = o.text_col;
  format.language_column = o.lang_col;
  format.vfc_column = o.vfc_col;
  format.harmful_column = o.harmful_col;
  if (!o.ingest_language.empty()) format.fixed_language = o.ingest_language;
  format.source = o.ingest_source;
  ctx.inputs.push_back(o.ingest_input);
  set_output(ctx, o.ingest_out);
  corpus::Collection collection;
  collection.id = fs::path(o.ingest_input).stem().string();
  collection.posts = corpus::load_dataset(o.ingest_input, format);
  corpus::check_unique_ids(collection.posts, o.ingest_input);
  if (collection.posts.empty()) ctx.log.warn("empty_dataset", {{"path", o.ingest_input}});
  ctx.log.info("ingest", {{"path", o.ingest_input}, {"posts", std::to_string(collection.posts.size())}});
  emit(ctx, o.ingest_out, corpus::format_collection(collection));
}

void cmd_preprocess(const Options& o, Context& ctx) {
  preprocess::PreprocessConfig config;
  config.method = o.pre_method;
  config.min_len_chars = o.pre_min_len;
  config.max_len_chars = o.pre_max_len;
  config.min_nondigit_chars = o.pre_min_nondigit;
  config.alphabet_whitelist = preprocess::ScriptSet::parse(o.pre_scripts);
  config.strip_social = !o.pre_keep_social;
  config.dedupe = !o.pre_keep_duplicates;
  config.validate();
  ctx.inputs.push_back(o.pre_input);
  set_output(ctx, o.pre_out);
  auto collection = corpus::load_collection(o.pre_input);
  collection.posts = preprocess::preprocess(collection.posts, config, preprocess::default_cleaner(), &ctx.log);
  if (!collection.split_assignment.empty()) {
    std::map<std::string, Fold> kept;
    for (const auto& p : collection.posts) kept.emplace(p.id, collection.split_assignment.at(p.id));
    collection.split_assignment = std::move(kept);
  }
  emit(ctx, o.pre_out, corpus::format_collection(collection));
}

void cmd_compose(const Options& o, Context& ctx) {
  ctx.inputs.push_back(o.recipe);
  set_output(ctx, o.compose_out);
  const auto recipe = corpus::CollectionRecipe::load(o.recipe);
  for (const auto& source : recipe.sources) ctx.inputs.push_back(source.path.string());
  if (recipe.split) ctx.seed = recipe.split->seed;
  const auto datasets = corpus::load_sources(recipe);
  const auto collection = corpus::compose_collection(recipe, datasets, &ctx.log);
  ctx.log.info("compose", {{"recipe", recipe.id}, {"posts", std::to_string(collection.posts.size())}});
  emit(ctx, o.compose_out, corpus::format_collection(collection));
}

void cmd_split(const Options& o, Context& ctx) {
  if (o.split_counts.empty() && o.split_fractions.empty()) {
    throw UsageError("split needs one of --counts or --fractions");
  }
  corpus::SplitSpec spec =
      o.split_counts.empty()
          ? corpus::SplitSpec::with_fractions(o.split_fractions[0], o.split_fractions[1], o.split_fractions[2],
                                              o.split_seed)
          : corpus::SplitSpec::with_counts(o.split_counts[0], o.split_counts[1], o.split_counts[2], o.split_seed);
  if (o.stratify) spec.stratify = true;
  if (o.no_stratify) spec.stratify = false;
  ctx.seed = o.split_seed;
  ctx.inputs.push_back(o.split_input);
  set_output(ctx, o.split_out);
  auto collection = corpus::split(corpus::load_collection(o.split_input), spec);
  ctx.log.info("split", {{"train", std::to_string(collection.fold_size(Fold::train))},
                         {"val", std::to_string(collection.fold_size(Fold::val))},
                         {"test", std::to_string(collection.fold_size(Fold::test))},
                         {"stratified", spec.stratified() ? "true" : "false"}});
  emit(ctx, o.split_out, corpus::format_collection(collection));
}

void cmd_train(const Options& o, Context& ctx) {
  if (o.train_input.empty() && (o.train_file.empty() || o.val_file.empty())) {
    throw UsageError("train needs --input, or both --train and --val");
  }
  classifier::TrainConfig config;
  config.learning_rate = o.lr;
  config.batch_size = o.batch_size;
  config.anneal_factor = o.anneal;
  config.patience = o.patience;
  config.max_epochs = o.epochs;
  config.seed = o.train_seed;
  config.hashing.min_n = o.min_n;
  config.hashing.max_n = o.max_n;
  config.hashing.dim = o.dim;
  config.hashing.seed = o.hash_seed;
  config.hashing.sentinels = !o.no_sentinels;
  config.validate();
  ctx.seed = o.train_seed;

  std::vector<Post> train;
  std::vector<Post> val;
  if (!o.train_input.empty()) {
    ctx.inputs.push_back(o.train_input);
    const auto collection = corpus::load_collection(o.train_input);
    train = posts_of(collection, Fold::train);
    val = posts_of(collection, Fold::val);
  } else {
    ctx.inputs.push_back(o.train_file);
    ctx.inputs.push_back(o.val_file);
    train = corpus::load_collection(o.train_file).posts;
    val = corpus::load_collection(o.val_file).posts;
  }
  const auto result = classifier::train_baseline(train, val, config, &ctx.log);

  fs::create_directories(o.train_out_dir);
  const fs::path dir(o.train_out_dir);
  classifier::save_model(result.best, dir / "best.ccm");
  classifier::save_model(result.last, dir / "last.ccm");
  ordered_json history = ordered_json::array();
  for (const auto& e : result.history) {
    history.push_back({{"epoch", e.epoch},
                       {"learning_rate", e.learning_rate},
                       {"train_loss", e.train_loss},
                       {"val_accuracy", e.val_accuracy},
                       {"improved", e.improved}});
  }
  ordered_json summary{{"best_epoch", result.best_epoch},
                       {"best_val_accuracy", result.best_val_accuracy},
                       {"epochs", history}};
  io::write_file_atomic(dir / "history.json", summary.dump(2) + "\n");
  ctx.outputs = {(dir / "best.ccm").string(), (dir / "last.ccm").string(), (dir / "history.json").string()};
  ctx.manifest_path = (dir / "manifest.json").string();
  ctx.out << "best epoch " << result.best_epoch << ", validation accuracy " << result.best_val_accuracy << "\n";
}

void cmd_predict(const Options& o, Context& ctx) {
  ctx.inputs = {o.predict_model, o.predict_input};
  set_output(ctx, o.predict_out);
  const auto model = classifier::load_model(o.predict_model);
  auto posts = posts_of(corpus::load_collection(o.predict_input), optional_fold(o.predict_fold));
  if (o.predict_clean) {
    for (auto& p : posts) p.text = preprocess::clean_text(p.text);
  }
  const std::string name = o.predict_name.empty() ? fs::path(o.predict_model).stem().string() : o.predict_name;
  emit(ctx, o.predict_out, classifier::format_predictions(classifier::predict(model, posts, name)));
}

void cmd_evaluate(const Options& o, Context& ctx) {
  if (!o.eval_names.empty() && o.eval_names.size() != o.eval_preds.size()) {
    throw UsageError("--name must be given once per --pred");
  }
  const Task task = parse_task(o.eval_task);
  const auto format = evaluation::parse_report_format(o.eval_format);
  ctx.inputs = o.eval_preds;
  ctx.inputs.push_back(o.eval_gold);
  set_output(ctx, o.eval_out);
  const auto gold = posts_of(corpus::load_collection(o.eval_gold), optional_fold(o.eval_fold));
  std::vector<std::pair<std::string, evaluation::EvalReport>> reports;
  for (std::size_t i = 0; i < o.eval_preds.size(); ++i) {
    const auto preds = classifier::load_predictions(o.eval_preds[i]);
    std::string name = !o.eval_names.empty() ? o.eval_names[i]
                       : !preds.model.empty() ? preds.model
                                              : fs::path(o.eval_preds[i]).stem().string();
    reports.emplace_back(std::move(name), evaluation::evaluate(preds, gold, task));
  }
  if (reports.size() == 1) {
    emit(ctx, o.eval_out, evaluation::format_report(reports.front().second, format));
    return;
  }
  const auto table = evaluation::compare_report(reports);
  if (format == evaluation::ReportFormat::structured) {
    auto doc = ordered_json::parse(evaluation::format_report(table, format));
    ordered_json details = ordered_json::object();
    for (const auto& [name, report] : reports) details[name] = ordered_json::parse(evaluation::format_report(report, format));
    doc["reports"] = details;
    emit(ctx, o.eval_out, doc.dump(2) + "\n");
    return;
  }
  std::string text = evaluation::format_report(table, format);
  for (const auto& [name, report] : reports) text += "\n" + name + "\n" + evaluation::format_report(report, format);
  emit(ctx, o.eval_out, text);
}

void cmd_mcnemar(const Options& o, Context& ctx) {
  const Task task = parse_task(o.mc_task);
  const auto format = evaluation::parse_report_format(o.mc_format);
  ctx.inputs = {o.mc_pred_a, o.mc_pred_b, o.mc_gold};
  set_output(ctx, o.mc_out);
  const auto gold = posts_of(corpus::load_collection(o.mc_gold), optional_fold(o.mc_fold));
  const auto a = evaluation::correctness(classifier::load_predictions(o.mc_pred_a), gold, task);
  const auto b = evaluation::correctness(classifier::load_predictions(o.mc_pred_b), gold, task);
  const auto result = evaluation::mcnemar(a, b, o.mc_alpha, evaluation::parse_mcnemar_method(o.mc_method));
  emit(ctx, o.mc_out, evaluation::format_report(result, format));
}

void cmd_length(const Options& o, Context& ctx) {
  const Task task = parse_task(o.len_task);
  const auto format = evaluation::parse_report_format(o.len_format);
  ctx.inputs = {o.len_pred, o.len_gold};
  set_output(ctx, o.len_out);
  const auto gold = posts_of(corpus::load_collection(o.len_gold), optional_fold(o.len_fold));
  const auto items = evaluation::positive_items(classifier::load_predictions(o.len_pred), gold, task);
  emit(ctx, o.len_out, evaluation::format_report(evaluation::length_quartile_recall(items), format));
}

void cmd_bench(const Options& o, Context& ctx) {
  bench::BenchConfig config;
  config.counts = o.bench_counts;
  config.warmup = o.bench_warmup;
  config.warmup_size = o.bench_warmup_size;
  config.repeats = o.bench_repeats;
  config.threads = o.bench_threads;
  config.human_seconds_per_post = o.human_seconds;
  config.label = o.bench_label;
  set_output(ctx, o.bench_out);

  classifier::ScorerModel model;
  if (!o.bench_model.empty()) {
    ctx.inputs.push_back(o.bench_model);
    model = classifier::load_model(o.bench_model);
  }
  std::vector<Post> posts;
  if (!o.bench_corpus.empty()) {
    ctx.inputs.push_back(o.bench_corpus);
    posts = corpus::load_collection(o.bench_corpus).posts;
  } else {
    ctx.seed = o.synth_seed;
    posts = bench::synth_corpus(o.synth_size, o.synth_seed);
  }
  const auto report = bench::run_bench(model, posts, config);
  const auto format = evaluation::parse_report_format(o.bench_format);
  emit(ctx, o.bench_out,
       format == evaluation::ReportFormat::table ? bench::format_bench_table({report})
                                                 : bench::format_bench_structured({report}));
}

void cmd_serve(const Options& o, Context& ctx, CLI::App& sub) {
  const auto env = service::read_env_settings();
  int port = o.serve_port;
  if (sub.count("--port") == 0 && env.port) port = *env.port;
  std::string model_path = o.serve_model;
  if (model_path.empty() && env.model_path) model_path = *env.model_path;

  service::ClassifierService svc({o.max_batch, o.max_text_chars}, &ctx.log);
  if (!model_path.empty()) {
    ctx.inputs.push_back(model_path);
    svc.load_model(model_path);
  } else {
    ctx.log.warn("no_model", {{"hint", "pass --model or set CLAIM_MODEL_PATH"}});
  }

  // Block termination signals here and wait for them on this thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::HttpServer server(svc, o.serve_host);
  const int bound = server.bind(port);
  server.start();
  ctx.log.info("listening", {{"host", o.serve_host}, {"port", std::to_string(bound)}});
  int received = 0;
  sigwait(&signals, &received);
  ctx.log.info("shutdown", {{"signal", std::to_string(received)}});
  server.stop();
}

std::string format_verification(const corpus::VerificationReport& report, evaluation::ReportFormat format) {
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
  if (format == evaluation::ReportFormat::structured) {
    auto row_json = [](const corpus::CountRow& r) {
      ordered_json j{{"language", r.language}};
      j["expected_positive"] = r.expected_positive ? ordered_json(*r.expected_positive) : ordered_json(nullptr);
      j["expected_negative"] = r.expected_negative ? ordered_json(*r.expected_negative) : ordered_json(nullptr);
      j["actual_positive"] = r.actual_positive;
      j["actual_negative"] = r.actual_negative;
      j["pass"] = r.pass;
      return j;
    };
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) rows.push_back(row_json(r));
    ordered_json doc{{"name", report.name}, {"task", std::string(task_name(report.task))}};
    doc["fold"] = report.fold ? ordered_json(std::string(corpus::fold_name(*report.fold))) : ordered_json(nullptr);
    doc["rows"] = rows;
    doc["total"] = row_json(report.total);
    doc["passed"] = report.passed;
    return doc.dump(2) + "\n";
  }
  std::vector<std::vector<std::string>> rows{
      {"language", "expected pos", "expected neg", "actual pos", "actual neg", "status"}};
  auto add = [&](const corpus::CountRow& r) {
    rows.push_back({r.language, opt(r.expected_positive), opt(r.expected_negative), std::to_string(r.actual_positive),
                    std::to_string(r.actual_negative), r.pass ? "PASS" : "FAIL"});
  };
  for (const auto& r : report.rows) add(r);
  add(report.total);
  std::string head = report.name + " (" + std::string(task_name(report.task)) +
                     (report.fold ? ", " + std::string(corpus::fold_name(*report.fold)) + " fold" : "") + ")\n";
  return head + evaluation::align_table(rows) + (report.passed ? "PASS\n" : "FAIL\n");
}

// Returns false on a count mismatch.
bool cmd_verify(const Options& o, Context& ctx) {
  if (o.verify_preset.empty() == o.verify_file.empty()) {
    throw UsageError("verify-counts needs exactly one of --expect or --expect-file");
  }
  ctx.inputs.push_back(o.verify_input);
  set_output(ctx, o.verify_out);
  const auto expectation = o.verify_preset.empty() ? corpus::CountExpectation::load(o.verify_file)
                                                   : corpus::CountExpectation::preset(o.verify_preset);
  if (!o.verify_file.empty()) ctx.inputs.push_back(o.verify_file);
  const auto report = corpus::verify_reference_counts(corpus::load_collection(o.verify_input), expectation);
  emit(ctx, o.verify_out, format_verification(report, evaluation::parse_report_format(o.verify_format)));
  if (!report.passed) ctx.log.error("count_mismatch", {{"expectation", report.name}});
  return report.passed;
}

// ----------------------------------------------------------------- parser

std::unique_ptr<CLI::App> build_app(Options& o) {
  auto app = std::make_unique<CLI::App>("Check-worthy claim detection toolkit", "claimcheck");
  app->require_subcommand(1);
  app->set_version_flag("--version", std::string(kVersion));
  app->option_defaults()->always_capture_default();

  const std::vector<std::string> formats{"table", "structured"};
  const std::vector<std::string> tasks{"vfc", "harmful"};
  const std::vector<std::string> folds{"train", "val", "test"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("--log-level", o.log_level, "Minimum level of structured log lines on stderr")
        ->check(CLI::IsMember({"debug", "info", "warn", "error"}));
    sub->add_option("--manifest", o.manifest, "Write the run manifest here instead of the default location");
  };

  auto* ingest = app->add_subcommand("ingest", "Load a labeled TSV dataset and write the canonical collection TSV");
  ingest->add_option("--input", o.ingest_input, "Dataset TSV")->required();
  ingest->add_option("--out", o.ingest_out, "Output TSV (stdout when omitted)");
  ingest->add_option("--id-col", o.id_col, "Id column name");
  ingest->add_option("--text-col", o.text_col, "Text column name");
  ingest->add_option("--lang-col", o.lang_col, "Language column name");
  ingest->add_option("--language", o.ingest_language, "Language tag for every row when the file has no language column");
  ingest->add_option("--vfc-col", o.vfc_col, "Verifiable-factual-claim label column name");
  ingest->add_option("--harmful-col", o.harmful_col, "Harmful label column name");
  ingest->add_option("--source", o.ingest_source, "Source name stamped on every post (default: file stem)");
  common(ingest);

  auto* pre = app->add_subcommand("preprocess", "Clean and filter a collection with method 1 or 2");
  pre->add_option("--input", o.pre_input, "Collection TSV")->required();
  pre->add_option("--out", o.pre_out, "Output TSV (stdout when omitted)");
  pre->add_option("--method", o.pre_method, "Pre-processing method")->check(CLI::IsMember({1, 2}));
  pre->add_option("--min-len", o.pre_min_len, "Minimum length in characters (method 2)");
  pre->add_option("--max-len", o.pre_max_len, "Maximum length in characters (method 2)");
  pre->add_option("--min-nondigit", o.pre_min_nondigit, "Minimum non-digit characters (method 2)");
  pre->add_option("--scripts", o.pre_scripts, "Comma-separated script whitelist (method 2)");
  pre->add_flag("--keep-social", o.pre_keep_social, "Do not remove #hashtag and @handle tokens");
  pre->add_flag("--keep-duplicates", o.pre_keep_duplicates, "Do not drop duplicate texts");
  common(pre);

  auto* compose = app->add_subcommand("compose", "Materialize a collection from a recipe");
  compose->add_option("--recipe", o.recipe, "Recipe JSON file")->required();
  compose->add_option("--out", o.compose_out, "Output TSV (stdout when omitted)");
  common(compose);

  auto* split = app->add_subcommand("split", "Assign train/val/test folds to a collection");
  split->add_option("--input", o.split_input, "Collection TSV")->required();
  split->add_option("--out", o.split_out, "Output TSV (stdout when omitted)");
  auto* counts = split->add_option("--counts", o.split_counts, "Exact fold sizes: TRAIN,VAL,TEST")
                     ->delimiter(',')
                     ->expected(3)
                     ->default_str("");
  auto* fractions = split->add_option("--fractions", o.split_fractions, "Fold fractions summing to 1: TRAIN,VAL,TEST")
                        ->delimiter(',')
                        ->expected(3)
                        ->default_str("");
  counts->excludes(fractions);
  split->add_option("--seed", o.split_seed, "Shuffle seed");
  auto* strat = split->add_flag("--stratify", o.stratify, "Stratify by label x language (default for --fractions)");
  auto* no_strat = split->add_flag("--no-stratify", o.no_stratify, "Disable stratification");
  strat->excludes(no_strat);
  common(split);

  auto* train = app->add_subcommand("train", "Train the hashed n-gram baseline; writes best.ccm and last.ccm");
  auto* t_input = train->add_option("--input", o.train_input, "Split collection TSV (uses its train and val folds)");
  auto* t_train = train->add_option("--train", o.train_file, "Training collection TSV");
  auto* t_val = train->add_option("--val", o.val_file, "Validation collection TSV");
  t_input->excludes(t_train)->excludes(t_val);
  train->add_option("--out-dir", o.train_out_dir, "Directory for models, history.json and manifest.json")->required();
  train->add_option("--lr", o.lr, "Initial learning rate");
  train->add_option("--batch-size", o.batch_size, "Mini-batch size");
  train->add_option("--anneal", o.anneal, "Learning-rate factor applied on a plateau");
  train->add_option("--patience", o.patience, "Non-improving epochs before annealing");
  train->add_option("--epochs", o.epochs, "Maximum number of epochs");
  train->add_option("--seed", o.train_seed, "Epoch shuffle seed");
  train->add_option("--min-n", o.min_n, "Smallest character n-gram");
  train->add_option("--max-n", o.max_n, "Largest character n-gram");
  train->add_option("--dim", o.dim, "Hash dimension (power of two)");
  train->add_option("--hash-seed", o.hash_seed, "MurmurHash3 seed");
  train->add_flag("--no-sentinels", o.no_sentinels, "Do not add boundary sentinels");
  common(train);

  auto* predict = app->add_subcommand("predict", "Score a collection and write a predictions file");
  predict->add_option("--model", o.predict_model, "Model file")->required();
  predict->add_option("--input", o.predict_input, "Collection TSV")->required();
  predict->add_option("--out", o.predict_out, "Predictions JSONL (stdout when omitted)");
  predict->add_option("--fold", o.predict_fold, "Only score this fold")->check(CLI::IsMember(folds));
  predict->add_option("--name", o.predict_name, "Model name recorded in each record (default: file stem)");
  predict->add_flag("--preprocess", o.predict_clean, "Apply social stripping and method-1 cleaning before scoring");
  common(predict);

  auto* evaluate = app->add_subcommand("evaluate", "Accuracy, recall, precision and F1 with per-language rows");
  evaluate->add_option("--pred", o.eval_preds, "Predictions JSONL; repeat to compare models")->required()->default_str("");
  evaluate->add_option("--name", o.eval_names, "Display name per --pred, in order")->default_str("");
  evaluate->add_option("--gold", o.eval_gold, "Gold collection TSV")->required();
  evaluate->add_option("--fold", o.eval_fold, "Only evaluate this fold")->check(CLI::IsMember(folds));
  evaluate->add_option("--task", o.eval_task, "Task")->check(CLI::IsMember(tasks));
  evaluate->add_option("--format", o.eval_format, "Output format")->check(CLI::IsMember(formats));
  evaluate->add_option("--out", o.eval_out, "Report file (stdout when omitted)");
  common(evaluate);

  auto* mc = app->add_subcommand("mcnemar", "McNemar test between two prediction files");
  mc->add_option("--pred-a", o.mc_pred_a, "Predictions of model A")->required();
  mc->add_option("--pred-b", o.mc_pred_b, "Predictions of model B")->required();
  mc->add_option("--gold", o.mc_gold, "Gold collection TSV")->required();
  mc->add_option("--fold", o.mc_fold, "Only use this fold")->check(CLI::IsMember(folds));
  mc->add_option("--task", o.mc_task, "Task")->check(CLI::IsMember(tasks));
  mc->add_option("--alpha", o.mc_alpha, "Significance level");
  mc->add_option("--method", o.mc_method, "auto, exact or chi2")
      ->check(CLI::IsMember({"auto", "exact", "exact-binomial", "chi2", "chi-square-cc"}));
  mc->add_option("--format", o.mc_format, "Output format")->check(CLI::IsMember(formats));
  mc->add_option("--out", o.mc_out, "Report file (stdout when omitted)");
  common(mc);

  auto* len = app->add_subcommand("length-analysis", "Recall of the positive class per length quartile");
  len->add_option("--pred", o.len_pred, "Predictions JSONL")->required();
  len->add_option("--gold", o.len_gold, "Gold collection TSV")->required();
  len->add_option("--fold", o.len_fold, "Only use this fold")->check(CLI::IsMember(folds));
  len->add_option("--task", o.len_task, "Task")->check(CLI::IsMember(tasks));
  len->add_option("--format", o.len_format, "Output format")->check(CLI::IsMember(formats));
  len->add_option("--out", o.len_out, "Report file (stdout when omitted)");
  common(len);

  auto* bn = app->add_subcommand("bench", "Time inference over 100/1000/2000 posts");
  bn->add_option("--model", o.bench_model, "Model file (default: untrained baseline with default hashing)");
  bn->add_option("--corpus", o.bench_corpus, "Collection TSV to score (default: synthetic corpus)");
  bn->add_option("--synth-size", o.synth_size, "Synthetic corpus size");
  bn->add_option("--synth-seed", o.synth_seed, "Synthetic corpus seed");
  bn->add_option("--counts", o.bench_counts, "Comma-separated post counts")->delimiter(',');
  bn->add_option("--warmup", o.bench_warmup, "Untimed warmup passes per count");
  bn->add_option("--warmup-size", o.bench_warmup_size, "Posts per warmup pass");
  bn->add_option("--repeats", o.bench_repeats, "Timed passes per count, each reported");
  bn->add_option("--threads", o.bench_threads, "Scoring threads (1 = sequential)");
  bn->add_option("--label", o.bench_label, "Hardware or configuration label");
  bn->add_option("--human-seconds", o.human_seconds, "Human seconds per post for the speedup");
  bn->add_option("--format", o.bench_format, "Output format")->check(CLI::IsMember(formats));
  bn->add_option("--out", o.bench_out, "Report file (stdout when omitted)");
  common(bn);

  auto* serve = app->add_subcommand("serve", "Serve /v1/classify, /v1/health and /v1/model over HTTP");
  serve->add_option("--port", o.serve_port, "Port (env CLAIM_PORT)");
  serve->add_option("--host", o.serve_host, "Bind address");
  serve->add_option("--model", o.serve_model, "Model file (env CLAIM_MODEL_PATH)");
  serve->add_option("--max-batch", o.max_batch, "Maximum texts per request");
  serve->add_option("--max-text-chars", o.max_text_chars, "Maximum characters per text");
  common(serve);

  auto* verify = app->add_subcommand("verify-counts", "Compare per-language label counts with a reference table");
  verify->add_option("--input", o.verify_input, "Collection TSV")->required();
  auto* preset = verify->add_option("--expect", o.verify_preset, "Built-in expectation")
                     ->check(CLI::IsMember(corpus::CountExpectation::preset_names()));
  auto* file = verify->add_option("--expect-file", o.verify_file, "Expectation JSON file");
  preset->excludes(file);
  verify->add_option("--format", o.verify_format, "Output format")->check(CLI::IsMember(formats));
  verify->add_option("--out", o.verify_out, "Report file (stdout when omitted)");
  common(verify);

  return app;
}

ordered_json manifest_of(const Context& ctx, const std::string& started, const std::string& finished) {
  ordered_json config = ordered_json::object();
  for (const CLI::Option* opt : ctx.command->get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help" || names.front() == "manifest") continue;
    if (opt->get_expected_min() == 0) {
      config[names.front()] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& results = opt->results();
      config[names.front()] = results.size() == 1 ? ordered_json(results.front()) : ordered_json(results);
    } else {
      config[names.front()] = opt->get_default_str();
    }
  }
  ordered_json doc{{"subcommand", ctx.command->get_name()}, {"tool_version", kVersion}, {"config", config}};
  doc["inputs"] = ctx.inputs;
  doc["outputs"] = ctx.outputs;
  doc["seed"] = ctx.seed ? ordered_json(*ctx.seed) : ordered_json(nullptr);
  doc["started_at"] = started;
  doc["finished_at"] = finished;
  return doc;
}

int dispatch(const Options& o, Context& ctx) {
  const std::string name = ctx.command->get_name();
  const std::string started = utc_now();
  bool ok = true;
  if (name == "ingest") cmd_ingest(o, ctx);
  else if (name == "preprocess") cmd_preprocess(o, ctx);
  else if (name == "compose") cmd_compose(o, ctx);
  else if (name == "split") cmd_split(o, ctx);
  else if (name == "train") cmd_train(o, ctx);
  else if (name == "predict") cmd_predict(o, ctx);
  else if (name == "evaluate") cmd_evaluate(o, ctx);
  else if (name == "mcnemar") cmd_mcnemar(o, ctx);
  else if (name == "length-analysis") cmd_length(o, ctx);
  else if (name == "bench") cmd_bench(o, ctx);
  else if (name == "serve") cmd_serve(o, ctx, *ctx.command);
  else if (name == "verify-counts") ok = cmd_verify(o, ctx);

  const auto manifest = manifest_of(ctx, started, utc_now());
  const std::string path = !o.manifest.empty() ? o.manifest : ctx.manifest_path;
  if (path.empty()) {
    ctx.log.info("manifest", {{"manifest", manifest.dump()}});
  } else {
    io::write_file_atomic(path, manifest.dump(2) + "\n");
  }
  return ok ? kExitOk : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options options;
  auto app = build_app(options);
  if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
      app->get_subcommand_no_throw(args.front()) == nullptr) {
    err << "error: unknown subcommand '" << args.front() << "'\n";
    err << "run 'claimcheck --help' for usage\n";
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app->parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help is raised as CallForHelp from inside the subcommand.
    err << "error: " << e.what() << "\n";
    err << "run 'claimcheck --help' for usage\n";
    return kExitUsage;
  }

  CLI::App* command = app->get_subcommands().front();
  Log log(err, Log::parse_level(options.log_level));
  Context ctx{out, err, log, nullptr, {}, {}, std::nullopt, {}};
  ctx.command = command;
  try {
    return dispatch(options, ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    log.error("failed", {{"subcommand", command->get_name()}, {"error", e.what()}});
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    log.error("failed", {{"subcommand", command->get_name()}, {"error", e.what()}});
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

std::vector<std::pair<std::string, std::vector<std::string>>> option_inventory() {
  Options options;
  auto app = build_app(options);
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  for (const CLI::App* sub : app->get_subcommands({})) {
    std::vector<std::string> flags;
    for (const CLI::Option* opt : sub->get_options()) {
      for (const auto& name : opt->get_lnames()) {
        if (name != "help") flags.push_back("--" + name);
      }
    }
    out.emplace_back(sub->get_name(), std::move(flags));
  }
  return out;
}

}  // namespace claimcheck::cli
