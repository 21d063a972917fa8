#include "claimcheck/service/service.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

// A burst of clients must queue rather than be refused.
#define CPPHTTPLIB_LISTEN_BACKLOG 256
#include <httplib.h>
#include <json.hpp>

#include "claimcheck/error.hpp"
#include "claimcheck/preprocess/pipeline.hpp"
#include "claimcheck/unicode.hpp"
#include "claimcheck/version.hpp"

namespace claimcheck::service {
namespace {

using nlohmann::ordered_json;

constexpr std::size_t kMaxPayloadBytes = 64u << 20;

Response json_response(int status, const ordered_json& doc) { return {status, doc.dump(), "application/json"}; }

}  // namespace

Response error_response(int status, std::string_view code, std::string_view message) {
  return json_response(status, {{"error", {{"code", std::string(code)}, {"message", std::string(message)}}}});
}

std::string model_identifier(const classifier::ScorerModel& model, std::string_view name) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(model.fingerprint()));
  return std::string(name) + "@" + hex;
}

ClassifierService::ClassifierService(ServiceConfig config, Log* log) : config_(config), log_(log) {
  if (config_.max_batch == 0) throw ConfigError("max batch must be at least 1");
}

void ClassifierService::set_model(classifier::ScorerModel model, std::string_view name) {
  model.validate();
  auto id = model_identifier(model, name);
  auto loaded = std::make_shared<const LoadedModel>(LoadedModel{std::move(model), std::move(id)});
  {
    std::lock_guard lock(mu_);
    model_ = loaded;
  }
  if (log_ != nullptr) log_->info("model_loaded", {{"model", loaded->id}});
}

void ClassifierService::load_model(const std::filesystem::path& path) {
  set_model(classifier::load_model(path), path.stem().string());
}

void ClassifierService::clear_model() {
  std::lock_guard lock(mu_);
  model_.reset();
}

std::shared_ptr<const LoadedModel> ClassifierService::model() const {
  std::lock_guard lock(mu_);
  return model_;
}

Response ClassifierService::classify(std::string_view body) const {
  const auto snapshot = model();
  if (!snapshot) return error_response(503, "model_unavailable", "no model is loaded");

  ordered_json request;
  try {
    request = ordered_json::parse(body);
  } catch (const ordered_json::exception& e) {
    return error_response(400, "invalid_json", e.what());
  }
  if (!request.is_object()) return error_response(400, "invalid_request", "request body must be a JSON object");
  for (const auto& [key, value] : request.items()) {
    if (key != "texts" && key != "preprocess" && key != "tasks") {
      return error_response(400, "invalid_request", "unknown field '" + key + "'");
    }
  }
  if (!request.contains("texts") || !request["texts"].is_array()) {
    return error_response(400, "invalid_request", "'texts' must be an array of strings");
  }
  const auto& texts = request["texts"];
  if (texts.empty()) return error_response(400, "empty_batch", "'texts' is empty");
  if (texts.size() > config_.max_batch) {
    return error_response(400, "batch_too_large", "batch of " + std::to_string(texts.size()) +
                                                      " texts exceeds the limit of " +
                                                      std::to_string(config_.max_batch));
  }
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (!texts[i].is_string()) {
      return error_response(400, "invalid_request", "texts[" + std::to_string(i) + "] is not a string");
    }
    if (unicode::char_count(texts[i].get_ref<const std::string&>()) > config_.max_text_chars) {
      return error_response(400, "text_too_long", "texts[" + std::to_string(i) + "] exceeds " +
                                                      std::to_string(config_.max_text_chars) + " characters");
    }
  }

  bool preprocess = true;
  if (request.contains("preprocess")) {
    if (!request["preprocess"].is_boolean()) {
      return error_response(400, "invalid_request", "'preprocess' must be a boolean");
    }
    preprocess = request["preprocess"].get<bool>();
  }

  bool want_vfc = true;
  bool want_harm = true;
  if (request.contains("tasks")) {
    const auto& tasks = request["tasks"];
    if (!tasks.is_array() || tasks.empty()) {
      return error_response(400, "invalid_request", "'tasks' must be a non-empty array");
    }
    want_vfc = want_harm = false;
    for (const auto& t : tasks) {
      if (!t.is_string()) return error_response(400, "invalid_request", "task names must be strings");
      const auto& name = t.get_ref<const std::string&>();
      if (name == "vfc") {
        want_vfc = true;
      } else if (name == "harmful") {
        want_harm = true;
      } else {
        return error_response(400, "unknown_task", "unknown task '" + name + "' (expected vfc or harmful)");
      }
    }
  }

  ordered_json results = ordered_json::array();
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto& raw = texts[i].get_ref<const std::string&>();
    const auto vector = snapshot->model.score(preprocess ? preprocess::clean_text(raw) : raw);
    const auto decision = classifier::decide(vector);
    ordered_json scores = ordered_json::object();
    ordered_json decisions = ordered_json::object();
    if (want_vfc) {
      scores["vfc_pos"] = vector.vfc->pos;
      scores["vfc_neg"] = vector.vfc->neg;
      decisions["vfc"] = *decision.vfc ? 1 : 0;
    }
    if (want_harm) {
      scores["harm_pos"] = vector.harmful->pos;
      scores["harm_neg"] = vector.harmful->neg;
      decisions["harmful"] = *decision.harmful ? 1 : 0;
    }
    results.push_back({{"index", i}, {"scores", scores}, {"decisions", decisions}});
  }
  return json_response(200, {{"model", snapshot->id}, {"preprocessed", preprocess}, {"results", results}});
}

Response ClassifierService::health() const {
  const auto snapshot = model();
  ordered_json doc{{"status", snapshot ? "ok" : "degraded"}, {"model_loaded", snapshot != nullptr}};
  doc["model"] = snapshot ? ordered_json(snapshot->id) : ordered_json(nullptr);
  doc["version"] = kVersion;
  return json_response(200, doc);
}

Response ClassifierService::model_info() const {
  const auto snapshot = model();
  if (!snapshot) return error_response(503, "model_unavailable", "no model is loaded");
  const auto& p = snapshot->model.params();
  return json_response(200, {{"model", snapshot->id},
                             {"format_version", classifier::ScorerModel::kFormatVersion},
                             {"hashing",
                              {{"min_n", p.min_n},
                               {"max_n", p.max_n},
                               {"dim", p.dim},
                               {"seed", p.seed},
                               {"sentinels", p.sentinels}}},
                             {"labels", snapshot->model.label_names()}});
}

struct HttpServer::Impl {
  ClassifierService& service;
  std::string host;
  httplib::Server server;
  std::thread thread;
  bool bound = false;

  Impl(ClassifierService& s, std::string h) : service(s), host(std::move(h)) {}
};

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

HttpServer::HttpServer(ClassifierService& service, std::string host)
    : impl_(std::make_unique<Impl>(service, std::move(host))) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;
  srv.set_payload_max_length(kMaxPayloadBytes);
  srv.Post("/v1/classify",
           [&svc](const httplib::Request& req, httplib::Response& res) { reply(res, svc.classify(req.body)); });
  srv.Get("/v1/health", [&svc](const httplib::Request&, httplib::Response& res) { reply(res, svc.health()); });
  srv.Get("/v1/model", [&svc](const httplib::Request&, httplib::Response& res) { reply(res, svc.model_info()); });
  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    std::string code = "http_error";
    if (res.status == 404) code = "not_found";
    if (res.status == 405) code = "method_not_allowed";
    if (res.status == 413) code = "payload_too_large";
    reply(res, error_response(res.status, code, req.method + " " + req.path));
  });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    reply(res, error_response(500, "internal_error", message));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(impl_->host);
  } else {
    bound = impl_->server.bind_to_port(impl_->host, port) ? port : -1;
  }
  if (bound < 0) throw IoError("cannot bind " + impl_->host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound;
}

void HttpServer::serve() {
  if (!impl_->bound) throw IoError("server is not bound");
  impl_->server.listen_after_bind();
}

void HttpServer::start() {
  if (!impl_->bound) throw IoError("server is not bound");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

EnvSettings read_env_settings() {
  EnvSettings s;
  if (const char* port = std::getenv("CLAIM_PORT"); port != nullptr && *port != '\0') {
    char* end = nullptr;
    const long v = std::strtol(port, &end, 10);
    if (*end != '\0' || v < 0 || v > 65535) throw ConfigError(std::string("CLAIM_PORT is not a port: ") + port);
    s.port = static_cast<int>(v);
  }
  if (const char* path = std::getenv("CLAIM_MODEL_PATH"); path != nullptr && *path != '\0') s.model_path = path;
  return s;
}

}  // namespace claimcheck::service
