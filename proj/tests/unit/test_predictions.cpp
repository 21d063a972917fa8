#include <gtest/gtest.h>

#include "claimcheck/classifier/predictions.hpp"
#include "claimcheck/error.hpp"
#include "claimcheck/evaluation/metrics.hpp"
#include "claimcheck/random.hpp"
#include "test_support.hpp"

namespace claimcheck::classifier {
namespace {

TEST(Predictions, ThreeLineFile) {
  const auto set = parse_predictions(
      R"({"id":"a","vfc_pos":0.9,"vfc_neg":0.1,"harm_pos":0.2,"harm_neg":0.7,"model":"m"}
{"id":"b","vfc_pos":0,"vfc_neg":1,"harm_pos":"NA","harm_neg":"NA"}

{"id":"c","harm_pos":1,"harm_neg":0.5}
)",
      "p.jsonl");
  ASSERT_EQ(set.size(), 3u);
  EXPECT_EQ(set.ids, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(set.model, "m");
  EXPECT_EQ(set.at("a"), LabelVector::from_array({0.9, 0.1, 0.2, 0.7}));
  EXPECT_FALSE(set.at("b").harmful.has_value());
  EXPECT_FALSE(set.at("c").vfc.has_value());
}

TEST(Predictions, OutOfRangeScoreReportsLine) {
  try {
    parse_predictions("{\"id\":\"a\",\"vfc_pos\":0.5,\"vfc_neg\":0.5}\n{\"id\":\"b\",\"vfc_pos\":1.7,\"vfc_neg\":0.1}\n",
                      "r.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("r.jsonl:2:"), std::string::npos);
  }
}

TEST(Predictions, MalformedRecords) {
  const char* bad[] = {
      "{not json}",
      "[1,2]",
      R"({"vfc_pos":0.5,"vfc_neg":0.5})",
      R"({"id":"a"})",
      R"({"id":"a","vfc_pos":0.5})",
      R"({"id":"a","vfc_pos":0.5,"vfc_neg":"NA"})",
      R"({"id":"a","vfc_pos":"x","vfc_neg":0.5})",
      R"({"id":"a","vfc_pos":0.5,"vfc_neg":0.5,"extra":1})",
      R"({"id":"a","vfc_pos":-0.1,"vfc_neg":0.5})",
  };
  for (const char* line : bad) EXPECT_THROW(parse_predictions(line, "m"), ParseError) << line;
  EXPECT_THROW(parse_predictions(R"({"id":"a","vfc_pos":0.5,"vfc_neg":0.5,"model":"x"}
{"id":"b","vfc_pos":0.5,"vfc_neg":0.5,"model":"y"})",
                                 "m"),
               ParseError);
}

TEST(Predictions, DuplicateId) {
  EXPECT_THROW(parse_predictions("{\"id\":\"a\",\"vfc_pos\":0.5,\"vfc_neg\":0.5}\n"
                                 "{\"id\":\"a\",\"vfc_pos\":0.4,\"vfc_neg\":0.5}\n",
                                 "d"),
               DuplicateIdError);
  PredictionSet set;
  set.add("x", LabelVector::from_array({0, 0, 0, 0}));
  EXPECT_THROW(set.add("x", LabelVector::from_array({0, 0, 0, 0})), DuplicateIdError);
}

TEST(Predictions, FormatRoundTripsExactly) {
  SeededRng rng(12);
  PredictionSet set;
  set.model = "rt";
  for (int i = 0; i < 200; ++i) {
    LabelVector v = LabelVector::from_array({rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()});
    if (i % 7 == 0) v.harmful.reset();
    if (i % 11 == 0) v.vfc.reset();
    if (!v.vfc && !v.harmful) v.vfc = ScorePair{1.0, 0.0};
    set.add("id-" + std::to_string(i), v);
  }
  const auto back = parse_predictions(format_predictions(set), "rt");
  EXPECT_EQ(back.ids, set.ids);
  EXPECT_EQ(back.scores, set.scores);
  EXPECT_EQ(back.model, "rt");
}

TEST(Predictions, SingleTaskLineUsesNA) {
  const auto line = format_prediction_line("z", LabelVector{ScorePair{0.25, 0.75}, std::nullopt});
  EXPECT_NE(line.find(R"("harm_pos":"NA")"), std::string::npos);
  EXPECT_EQ(parse_predictions(line, "z").at("z").vfc, (ScorePair{0.25, 0.75}));
}

TEST(Predictions, MissingGoldIdIsListedDownstream) {
  const auto set = parse_predictions("{\"id\":\"a\",\"vfc_pos\":0.5,\"vfc_neg\":0.5}\n"
                                     "{\"id\":\"b\",\"vfc_pos\":0.5,\"vfc_neg\":0.5}\n",
                                     "p");
  const std::vector<Post> gold{testing::make_post("a", "x", "en", true), testing::make_post("b", "y", "en", false),
                               testing::make_post("c", "z", "en", true)};
  try {
    evaluation::evaluate(set, gold, Task::vfc);
    FAIL() << "expected MissingPredictionError";
  } catch (const MissingPredictionError& e) {
    EXPECT_EQ(e.ids(), (std::vector<std::string>{"c"}));
  }
}

TEST(Predictions, PredictScoresEveryPost) {
  const auto& model = testing::separable_result().best;
  const auto c = testing::separable_collection();
  const auto set = predict(model, c.posts, "baseline");
  EXPECT_EQ(set.size(), c.posts.size());
  EXPECT_EQ(set.model, "baseline");
  EXPECT_EQ(set.at(c.posts[0].id), model.score(c.posts[0].text));
  testing::TempDir dir;
  write_predictions(set, dir / "p.jsonl");
  EXPECT_EQ(load_predictions(dir / "p.jsonl").scores, set.scores);
}

}  // namespace
}  // namespace claimcheck::classifier
