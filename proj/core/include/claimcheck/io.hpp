#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace claimcheck::io {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// TSV field escaping: backslash, tab, newline and carriage return become
// \\, \t, \n and \r. Unknown escapes are kept verbatim on unescape.
std::string escape_field(std::string_view field);
std::string unescape_field(std::string_view field);

std::vector<std::string_view> split_tabs(std::string_view line);

// Splits on '\n', dropping one trailing '\r' per line. A final empty line
// (file ending in a newline) is not reported.
std::vector<std::string_view> split_lines(std::string_view content);

}  // namespace claimcheck::io
