#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace claimcheck::unicode {

// Decodes UTF-8 into code points. Ill-formed sequences become U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

bool is_valid_utf8(std::string_view utf8);

// Number of Unicode scalar values.
std::size_t char_count(std::string_view utf8);

bool is_whitespace(char32_t cp);
bool is_alpha(char32_t cp);
bool is_digit(char32_t cp);
bool is_alnum(char32_t cp);
// General category P* or S*.
bool is_punct_or_symbol(char32_t cp);

}  // namespace claimcheck::unicode
