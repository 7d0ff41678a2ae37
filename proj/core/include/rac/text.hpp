#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rac::text {

std::string_view trim(std::string_view s);

std::string to_lower_ascii(std::string_view s);

// Trim, collapse internal whitespace runs to one space, ASCII case-fold.
// Used for choice distinctness and question dedupe.
std::string normalize(std::string_view s);

// Replaces every newline (and CR) with a space, so the text renders on one line.
std::string single_line(std::string_view s);

// Number of UTF-8 code points. Invalid bytes count as one each.
std::size_t code_points(std::string_view s);

// Drops byte sequences that are not well-formed UTF-8.
std::string sanitize_utf8(std::string_view s);

// Byte length of the longest prefix of `s` holding at most `n` code points.
std::size_t prefix_bytes(std::string_view s, std::size_t n);

std::vector<std::string_view> split_lines(std::string_view s);

// Lowercased runs of ASCII letters/digits (apostrophes and hyphens inside a
// word are kept). Non-ASCII bytes are treated as word characters.
std::vector<std::string> words(std::string_view s);

std::string hex(const unsigned char* data, std::size_t n);

}  // namespace rac::text
