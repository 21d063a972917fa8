#pragma once

#include <cstddef>
#include <iosfwd>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace claimcheck {

// Structured log: every record is one JSON object per line on the sink, and
// is also retained in memory so callers (and tests) can inspect warnings.
class Log {
 public:
  enum class Level { debug = 0, info = 1, warn = 2, error = 3 };
  using Fields = std::vector<std::pair<std::string, std::string>>;

  struct Entry {
    Level level;
    std::string event;
    Fields fields;
  };

  Log() = default;
  explicit Log(std::ostream& sink, Level min_level = Level::info)
      : sink_(&sink), min_level_(min_level) {}

  Log(const Log&) = delete;
  Log& operator=(const Log&) = delete;

  void write(Level level, std::string_view event, Fields fields = {});
  void debug(std::string_view event, Fields fields = {}) { write(Level::debug, event, std::move(fields)); }
  void info(std::string_view event, Fields fields = {}) { write(Level::info, event, std::move(fields)); }
  void warn(std::string_view event, Fields fields = {}) { write(Level::warn, event, std::move(fields)); }
  void error(std::string_view event, Fields fields = {}) { write(Level::error, event, std::move(fields)); }

  std::vector<Entry> entries() const;
  std::size_t count(Level level) const;

  static std::string format(const Entry& entry);
  static std::string_view level_name(Level level);
  static Level parse_level(std::string_view name);

 private:
  mutable std::mutex mu_;
  std::ostream* sink_ = nullptr;
  Level min_level_ = Level::info;
  std::vector<Entry> entries_;
};

}  // namespace claimcheck
