#include "claimcheck/log.hpp"

#include <ostream>

#include <json.hpp>

#include "claimcheck/error.hpp"

namespace claimcheck {

void Log::write(Level level, std::string_view event, Fields fields) {
  Entry entry{level, std::string(event), std::move(fields)};
  std::lock_guard lock(mu_);
  if (sink_ != nullptr && level >= min_level_) {
    *sink_ << format(entry) << '\n';
    sink_->flush();
  }
  entries_.push_back(std::move(entry));
}

std::vector<Log::Entry> Log::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t Log::count(Level level) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& e : entries_) {
    if (e.level == level) ++n;
  }
  return n;
}

std::string Log::format(const Entry& entry) {
  nlohmann::ordered_json j;
  j["level"] = level_name(entry.level);
  j["event"] = entry.event;
  for (const auto& [key, value] : entry.fields) j[key] = value;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string_view Log::level_name(Level level) {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
  }
  return "info";
}

Log::Level Log::parse_level(std::string_view name) {
  if (name == "debug") return Level::debug;
  if (name == "info") return Level::info;
  if (name == "warn") return Level::warn;
  if (name == "error") return Level::error;
  throw ConfigError("unknown log level '" + std::string(name) + "'");
}

}  // namespace claimcheck
