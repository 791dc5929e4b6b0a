#pragma once

#include <string>
#include <string_view>

namespace liteval::unicode {

// Decodes UTF-8 into Unicode scalar values. Malformed sequences decode to
// U+FFFD one byte at a time, so offsets stay well defined on bad input.
std::u32string decode(std::string_view utf8);

std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

// Number of scalar values; this is the unit of every span offset.
std::size_t length(std::string_view utf8);

// Substring in scalar-value coordinates, [start, end).
std::string slice(std::string_view utf8, std::size_t start, std::size_t end);

bool is_space(char32_t cp);
bool is_cjk(char32_t cp);

}  // namespace liteval::unicode
