#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rac/model.hpp"

namespace rac::io {

namespace fs = std::filesystem;

// Throws ConfigError when the file cannot be read.
std::string read_file(const fs::path& path);

// Writes `contents` verbatim, creating parent directories.
void write_file(const fs::path& path, std::string_view contents);

// Non-empty lines with their 1-based line numbers.
struct Line {
  std::size_t number;
  std::string text;
};
std::vector<Line> read_lines(const fs::path& path);

std::vector<json> read_jsonl(const fs::path& path);
void write_jsonl(const fs::path& path, const std::vector<json>& records);

// Strict: any bad record raises ValidationError prefixed with "line N".
std::vector<McqPair> read_pairs(const fs::path& path);
void write_pairs(const fs::path& path, const std::vector<McqPair>& pairs);

// Pretty-printed JSON document with a trailing newline.
void write_json(const fs::path& path, const json& doc);
json read_json(const fs::path& path);

// Appends one line under an exclusive file handle.
void append_line(const fs::path& path, std::string_view line);

}  // namespace rac::io
