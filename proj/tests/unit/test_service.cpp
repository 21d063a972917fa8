#include <gtest/gtest.h>

#include <cmath>
#include <future>

#include <httplib.h>
#include <json.hpp>

#include "claimcheck/error.hpp"
#include "claimcheck/io.hpp"
#include "claimcheck/preprocess/pipeline.hpp"
#include "claimcheck/service/service.hpp"
#include "test_support.hpp"

namespace claimcheck::service {
namespace {

using nlohmann::json;

std::string error_code(const Response& r) { return json::parse(r.body)["error"]["code"]; }

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { service.set_model(testing::separable_result().best, "baseline"); }
  ClassifierService service;
};

TEST(ServiceNoModel, ReportsUnavailable) {
  ClassifierService s;
  const auto r = s.classify(R"({"texts":["a"]})");
  EXPECT_EQ(r.status, 503);
  EXPECT_EQ(error_code(r), "model_unavailable");
  const auto h = json::parse(s.health().body);
  EXPECT_EQ(h["model_loaded"], false);
  EXPECT_EQ(h["status"], "degraded");
  EXPECT_TRUE(h["model"].is_null());
  EXPECT_EQ(s.model_info().status, 503);
}

TEST_F(ServiceTest, TwoTextRoundTrip) {
  const std::vector<std::string> texts{"The unemployment rate fell to 4 percent in March!",
                                       "lol what a day #mood @friend"};
  const auto r = service.classify(json{{"texts", texts}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  const auto doc = json::parse(r.body);
  ASSERT_EQ(doc["results"].size(), 2u);
  EXPECT_EQ(doc["preprocessed"], true);
  const auto& model = service.model()->model;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& res = doc["results"][i];
    EXPECT_EQ(res["index"], i);
    ASSERT_EQ(res["scores"].size(), 4u);
    for (const auto& [k, v] : res["scores"].items()) {
      EXPECT_GE(v.get<double>(), 0.0) << k;
      EXPECT_LE(v.get<double>(), 1.0) << k;
    }
    const auto expected = model.score(preprocess::clean_text(texts[i]));
    EXPECT_EQ(res["scores"]["vfc_pos"].get<double>(), expected.vfc->pos);
    EXPECT_EQ(res["scores"]["harm_neg"].get<double>(), expected.harmful->neg);
    const auto d = classifier::decide(expected);
    EXPECT_EQ(res["decisions"]["vfc"], *d.vfc ? 1 : 0);
    EXPECT_EQ(res["decisions"]["harmful"], *d.harmful ? 1 : 0);
  }
}

TEST_F(ServiceTest, RequestErrors) {
  auto expect = [&](const std::string& body, int status, const std::string& code) {
    const auto r = service.classify(body);
    EXPECT_EQ(r.status, status) << body;
    EXPECT_EQ(error_code(r), code) << body;
  };
  expect(R"({"texts":[]})", 400, "empty_batch");
  expect(R"({"texts":["a"],"tasks":["spam"]})", 400, "unknown_task");
  expect("{oops", 400, "invalid_json");
  expect(R"([1])", 400, "invalid_request");
  expect(R"({"texts":[1]})", 400, "invalid_request");
  expect(R"({"texts":["a"],"limit":3})", 400, "invalid_request");
  expect(R"({"texts":"a"})", 400, "invalid_request");
  expect(R"({"texts":["a"],"preprocess":"yes"})", 400, "invalid_request");
  expect(R"({"texts":["a"],"tasks":[]})", 400, "invalid_request");

  ClassifierService small(ServiceConfig{2, 5});
  small.set_model(testing::separable_result().best, "b");
  EXPECT_EQ(error_code(small.classify(R"({"texts":["a","b","c"]})")), "batch_too_large");
  EXPECT_EQ(error_code(small.classify(R"({"texts":["abcdef"]})")), "text_too_long");
  EXPECT_EQ(small.classify(R"({"texts":["жжжжж"]})").status, 200);
}

TEST_F(ServiceTest, TaskSelectionAndRawText) {
  const auto doc = json::parse(service.classify(R"({"texts":["x"],"tasks":["vfc"],"preprocess":false})").body);
  EXPECT_EQ(doc["preprocessed"], false);
  EXPECT_EQ(doc["results"][0]["scores"].size(), 2u);
  EXPECT_TRUE(doc["results"][0]["scores"].contains("vfc_pos"));
  EXPECT_FALSE(doc["results"][0]["decisions"].contains("harmful"));
}

TEST(ServiceDecisions, PublishedScoreVectorDecidesPositive) {
  classifier::HashingParams p;
  p.dim = 1u << 4;
  classifier::ScorerModel m(p);
  auto logit = [](double q) { return static_cast<float>(std::log(q / (1.0 - q))); };
  m.bias() = {logit(0.9999), -40.0f, logit(0.6798), logit(0.0528)};
  ClassifierService s;
  s.set_model(m, "fixed");
  const auto doc = json::parse(s.classify(R"({"texts":[""]})").body);
  const auto& res = doc["results"][0];
  EXPECT_NEAR(res["scores"]["vfc_pos"].get<double>(), 0.9999, 1e-6);
  EXPECT_NEAR(res["scores"]["vfc_neg"].get<double>(), 0.0, 1e-6);
  EXPECT_NEAR(res["scores"]["harm_pos"].get<double>(), 0.6798, 1e-6);
  EXPECT_NEAR(res["scores"]["harm_neg"].get<double>(), 0.0528, 1e-6);
  EXPECT_EQ(res["decisions"]["vfc"], 1);
  EXPECT_EQ(res["decisions"]["harmful"], 1);
}

TEST_F(ServiceTest, HealthAndModelInfo) {
  const auto h1 = service.health().body;
  EXPECT_EQ(h1, service.health().body);
  const auto h = json::parse(h1);
  EXPECT_EQ(h["model_loaded"], true);
  EXPECT_EQ(h["status"], "ok");
  const auto info = json::parse(service.model_info().body);
  EXPECT_EQ(info["labels"], json({"vfc_pos", "vfc_neg", "harm_pos", "harm_neg"}));
  EXPECT_EQ(info["format_version"], 1);
  EXPECT_EQ(info["model"], service.model()->id);
  EXPECT_EQ(service.model()->id.rfind("baseline@", 0), 0u);
}

TEST_F(ServiceTest, LoadModelFromDiskAndFailedLoadKeepsCurrent) {
  testing::TempDir dir;
  classifier::save_model(testing::separable_result().last, dir / "last.ccm");
  service.load_model(dir / "last.ccm");
  EXPECT_EQ(service.model()->id.rfind("last@", 0), 0u);
  io::write_file_atomic(dir / "bad.ccm", "garbage");
  EXPECT_THROW(service.load_model(dir / "bad.ccm"), Error);
  EXPECT_EQ(service.model()->id.rfind("last@", 0), 0u);
  service.clear_model();
  EXPECT_EQ(service.model(), nullptr);
}

std::string storm_body(int i) {
  return json{{"texts", {"request " + std::to_string(i) + " claims the bridge cost 3 million",
                         "Здравей " + std::to_string(i * 7)}}}
      .dump();
}

TEST_F(ServiceTest, HttpConcurrentStormMatchesSequential) {
  HttpServer server(service);
  const int port = server.bind(0);
  server.start();

  std::vector<std::string> sequential;
  {
    httplib::Client client("127.0.0.1", port);
    for (int i = 0; i < 32; ++i) {
      const auto res = client.Post("/v1/classify", storm_body(i), "application/json");
      ASSERT_TRUE(res);
      ASSERT_EQ(res->status, 200);
      sequential.push_back(res->body);
    }
  }
  std::vector<std::future<std::string>> futures;
  for (int i = 0; i < 32; ++i) {
    futures.push_back(std::async(std::launch::async, [port, i] {
      httplib::Client client("127.0.0.1", port);
      const auto res = client.Post("/v1/classify", storm_body(i), "application/json");
      return res ? res->body : std::string("transport failure");
    }));
  }
  for (int i = 0; i < 32; ++i) EXPECT_EQ(futures[i].get(), sequential[i]) << "request " << i;

  httplib::Client client("127.0.0.1", port);
  const auto health = client.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  const auto missing = client.Get("/v2/nothing");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(json::parse(missing->body)["error"]["code"], "not_found");
  const auto empty = client.Post("/v1/classify", R"({"texts":[]})", "application/json");
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->status, 400);
  EXPECT_EQ(json::parse(empty->body)["error"]["code"], "empty_batch");
  server.stop();
}

TEST(ServiceEnv, ReadsSettings) {
  ::setenv("CLAIM_PORT", "8123", 1);
  ::setenv("CLAIM_MODEL_PATH", "/tmp/m.ccm", 1);
  const auto s = read_env_settings();
  EXPECT_EQ(s.port, 8123);
  EXPECT_EQ(s.model_path, "/tmp/m.ccm");
  ::setenv("CLAIM_PORT", "http", 1);
  EXPECT_THROW(read_env_settings(), ConfigError);
  ::unsetenv("CLAIM_PORT");
  ::unsetenv("CLAIM_MODEL_PATH");
  EXPECT_FALSE(read_env_settings().port.has_value());
}

}  // namespace
}  // namespace claimcheck::service
