#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "claimcheck/bench/bench.hpp"
#include "claimcheck/classifier/predictions.hpp"
#include "claimcheck/cli/cli.hpp"
#include "claimcheck/corpus/dataset.hpp"
#include "claimcheck/io.hpp"
#include "test_support.hpp"

namespace claimcheck::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, kExitUsage);
  const auto unknown = run_cli({"frobnicate"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_TRUE(contains(unknown.err, "unknown subcommand 'frobnicate'"));
  const auto conflict = run_cli({"split", "--input", "x.tsv", "--counts", "1,1,1", "--fractions", "0.5,0.25,0.25"});
  EXPECT_EQ(conflict.code, kExitUsage);
  EXPECT_TRUE(contains(conflict.err, "--counts"));
  EXPECT_TRUE(contains(conflict.err, "--fractions"));
  EXPECT_EQ(run_cli({"evaluate", "--gold", "g.tsv"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"--version"}).code, kExitOk);
}

TEST(Cli, DataErrorsExitTwo) {
  const auto missing = run_cli({"preprocess", "--input", "/nonexistent/in.tsv"});
  EXPECT_EQ(missing.code, kExitData);
  EXPECT_FALSE(missing.err.empty());
}

TEST(Cli, ComposeWritesCollectionAndManifest) {
  testing::TempDir dir;
  const auto out = (dir / "c1.tsv").string();
  const auto r = run_cli({"compose", "--recipe", testing::data_path("recipe/recipe.json").string(), "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto c = corpus::load_collection(out);
  EXPECT_EQ(c.posts.size(), 3u);
  const auto manifest = nlohmann::json::parse(io::read_file(out + ".manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "compose");
  EXPECT_EQ(manifest["outputs"][0], out);
  EXPECT_TRUE(manifest.contains("tool_version"));
  EXPECT_TRUE(manifest["config"].contains("recipe"));
}

TEST(Cli, SplitTableThirteenCounts) {
  testing::TempDir dir;
  corpus::Collection c;
  c.posts = bench::synth_corpus(22867, 13);
  corpus::write_collection(c, dir / "all.tsv");
  const auto r = run_cli({"split", "--input", (dir / "all.tsv").string(), "--counts", "14032,5137,3698", "--seed",
                          "3", "--out", (dir / "split.tsv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto s = corpus::load_collection(dir / "split.tsv");
  EXPECT_EQ(s.fold_size(corpus::Fold::train), 14032u);
  EXPECT_EQ(s.fold_size(corpus::Fold::val), 5137u);
  EXPECT_EQ(s.fold_size(corpus::Fold::test), 3698u);
}

TEST(Cli, EndToEndPipeline) {
  testing::TempDir dir;
  const auto d = [&](const char* name) { return (dir / name).string(); };
  const auto data = testing::data_path("train/separable_200.tsv").string();

  auto r = run_cli({"ingest", "--input", data, "--source", "fixture", "--out", d("ingested.tsv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  r = run_cli({"preprocess", "--input", d("ingested.tsv"), "--method", "1", "--out", d("clean.tsv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  r = run_cli({"split", "--input", d("clean.tsv"), "--fractions", "0.7,0.15,0.15", "--seed", "5", "--out",
               d("split.tsv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  r = run_cli({"train", "--input", d("split.tsv"), "--out-dir", d("model"), "--dim", "16384", "--epochs", "6",
               "--seed", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"best.ccm", "last.ccm", "history.json", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "model" / f)) << f;
  }

  r = run_cli({"predict", "--model", d("model/best.ccm"), "--input", d("split.tsv"), "--fold", "test", "--out",
               d("best.jsonl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  r = run_cli({"predict", "--model", d("model/last.ccm"), "--input", d("split.tsv"), "--fold", "test", "--out",
               d("last.jsonl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto preds = classifier::load_predictions(d("best.jsonl"));
  EXPECT_EQ(preds.size(), corpus::load_collection(d("split.tsv")).fold_size(corpus::Fold::test));

  r = run_cli({"evaluate", "--pred", d("best.jsonl"), "--gold", d("split.tsv"), "--fold", "test", "--task", "vfc"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "accuracy"));

  r = run_cli({"evaluate", "--pred", d("best.jsonl"), "--pred", d("last.jsonl"), "--name", "best", "--name", "last",
               "--gold", d("split.tsv"), "--fold", "test", "--format", "structured"});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  r = run_cli({"mcnemar", "--pred-a", d("best.jsonl"), "--pred-b", d("last.jsonl"), "--gold", d("split.tsv"),
               "--fold", "test", "--format", "structured"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("p_value"));

  r = run_cli({"length-analysis", "--pred", d("best.jsonl"), "--gold", d("split.tsv"), "--fold", "test"});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  r = run_cli({"bench", "--model", d("model/best.ccm"), "--synth-size", "300", "--counts", "100,300", "--format",
               "structured"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)[0]["rows"].size(), 2u);

  // Evaluating against the full collection leaves most gold ids unpredicted.
  r = run_cli({"evaluate", "--pred", d("best.jsonl"), "--gold", d("split.tsv")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_TRUE(contains(r.err, "no vfc prediction"));
}

TEST(Cli, VerifyCountsPassAndMismatch) {
  testing::TempDir dir;
  io::write_file_atomic(dir / "expect.json", R"({"name":"fixture","task":"vfc","languages":{"en":[100,100]}})");
  const auto data = testing::data_path("train/separable_200.tsv").string();
  auto r = run_cli({"verify-counts", "--input", data, "--expect-file", (dir / "expect.json").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err << r.out;
  io::write_file_atomic(dir / "wrong.json", R"({"task":"vfc","languages":{"en":[101,99]}})");
  r = run_cli({"verify-counts", "--input", data, "--expect-file", (dir / "wrong.json").string()});
  EXPECT_EQ(r.code, kExitData);
  r = run_cli({"verify-counts", "--input", data, "--expect", "clef2022-1b-all", "--expect-file", "x.json"});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(Cli, EveryFlagIsInHelpAndReadme) {
  const auto readme = io::read_file(testing::source_path("README.md"));
  for (const auto& [sub, flags] : option_inventory()) {
    const auto help = run_cli({sub, "--help"});
    EXPECT_EQ(help.code, kExitOk) << sub;
    EXPECT_TRUE(contains(readme, "### " + sub)) << "README lacks a section for " << sub;
    for (const auto& flag : flags) {
      EXPECT_TRUE(contains(help.out, flag)) << sub << " " << flag;
      EXPECT_TRUE(contains(readme, "`" + flag)) << "README lacks " << sub << " " << flag;
    }
  }
}

}  // namespace
}  // namespace claimcheck::cli
