#include "claimcheck/post.hpp"

#include "claimcheck/error.hpp"

namespace claimcheck {

std::string_view task_name(Task task) {
  return task == Task::vfc ? "vfc" : "harmful";
}

Task parse_task(std::string_view name) {
  if (name == "vfc") return Task::vfc;
  if (name == "harmful" || name == "harm") return Task::harmful;
  throw ConfigError("unknown task '" + std::string(name) + "' (expected vfc or harmful)");
}

bool is_valid_language_tag(std::string_view tag) {
  if (tag.size() < 2 || tag.size() > 3) return false;
  for (char c : tag) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

}  // namespace claimcheck
