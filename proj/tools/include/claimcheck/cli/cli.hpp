#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace claimcheck::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Long flag names accepted by each subcommand, straight from the parser.
std::vector<std::pair<std::string, std::vector<std::string>>> option_inventory();

}  // namespace claimcheck::cli
