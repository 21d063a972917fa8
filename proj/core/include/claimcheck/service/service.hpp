#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "claimcheck/classifier/model.hpp"
#include "claimcheck/log.hpp"

namespace claimcheck::service {

struct ServiceConfig {
  std::size_t max_batch = 256;
  std::size_t max_text_chars = 10000;
};

struct LoadedModel {
  classifier::ScorerModel model;
  std::string id;  // "<name>@<fingerprint>"
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Transport-free request handling; HttpServer binds these to routes. The
// model is swapped atomically: each request pins one shared_ptr snapshot.
// Wire schemas are documented in docs/service-api.md.
class ClassifierService {
 public:
  explicit ClassifierService(ServiceConfig config = {}, Log* log = nullptr);

  void set_model(classifier::ScorerModel model, std::string_view name);
  // Throws whatever load_model throws; the current model stays in place then.
  void load_model(const std::filesystem::path& path);
  void clear_model();
  std::shared_ptr<const LoadedModel> model() const;

  const ServiceConfig& config() const { return config_; }

  Response classify(std::string_view body) const;
  Response health() const;
  Response model_info() const;

 private:
  ServiceConfig config_;
  Log* log_;
  mutable std::mutex mu_;
  std::shared_ptr<const LoadedModel> model_;
};

Response error_response(int status, std::string_view code, std::string_view message);

std::string model_identifier(const classifier::ScorerModel& model, std::string_view name);

// HTTP/1.1 front end over cpp-httplib.
class HttpServer {
 public:
  explicit HttpServer(ClassifierService& service, std::string host = "127.0.0.1");
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // port 0 picks a free port. Returns the bound port; throws IoError.
  int bind(int port);
  // Blocks until stop().
  void serve();
  // serve() on a background thread; returns once the server accepts requests.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// CLAIM_PORT and CLAIM_MODEL_PATH; throws ConfigError on a malformed port.
struct EnvSettings {
  std::optional<int> port;
  std::optional<std::string> model_path;
};
EnvSettings read_env_settings();

}  // namespace claimcheck::service
