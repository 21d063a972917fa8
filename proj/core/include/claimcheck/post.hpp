#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace claimcheck {

enum class Task { vfc, harmful };

inline constexpr std::array<Task, 2> kTasks{Task::vfc, Task::harmful};

std::string_view task_name(Task task);
// Accepts "vfc" and "harmful" (also "harm"); throws ConfigError otherwise.
Task parse_task(std::string_view name);

// Gold binary labels. Either task may be unlabeled.
struct TaskLabels {
  std::optional<bool> vfc;
  std::optional<bool> harmful;

  const std::optional<bool>& get(Task task) const { return task == Task::vfc ? vfc : harmful; }
  std::optional<bool>& get(Task task) { return task == Task::vfc ? vfc : harmful; }
  bool any() const { return vfc.has_value() || harmful.has_value(); }

  friend bool operator==(const TaskLabels&, const TaskLabels&) = default;
};

struct Post {
  std::string id;
  std::string text;
  std::string language;
  std::string source;
  TaskLabels labels;

  friend bool operator==(const Post&, const Post&) = default;
};

// ^[a-z]{2,3}$ or "und"
bool is_valid_language_tag(std::string_view tag);

}  // namespace claimcheck
