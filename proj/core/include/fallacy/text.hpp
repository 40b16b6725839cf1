#pragma once

// Small string helpers. Offsets called "characters" throughout the library are
// Unicode code points of UTF-8 text.

#include <cstddef>
#include <string>
#include <string_view>

namespace fallacy::text {

std::string_view trim(std::string_view s);

/// ASCII-only lowercase; non-ASCII bytes pass through untouched.
std::string ascii_lower(std::string_view s);

/// Case-insensitive (ASCII) substring search; npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0);

bool iequals(std::string_view a, std::string_view b);

/// Number of code points. Invalid bytes count as one character each.
std::size_t char_count(std::string_view s);

/// Byte offset of the code point with index `chars`; s.size() if past the end.
std::size_t byte_offset(std::string_view s, std::size_t chars);

/// Code-point substring [start, end).
std::string_view char_slice(std::string_view s, std::size_t start, std::size_t end);

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace fallacy::text
