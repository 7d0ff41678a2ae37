#include "rac/io.hpp"

#include <fstream>
#include <sstream>

#include "rac/error.hpp"

namespace rac::io {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ConfigError("write failed for " + path.string());
}

std::vector<Line> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::vector<Line> lines;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back({n, std::move(line)});
  }
  return lines;
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::vector<json> out;
  for (const Line& l : read_lines(path)) {
    json j = json::parse(l.text, nullptr, false);
    if (j.is_discarded()) {
      throw ValidationError("", path.string() + " line " + std::to_string(l.number) +
                                    ": malformed JSON");
    }
    out.push_back(std::move(j));
  }
  return out;
}

void write_jsonl(const fs::path& path, const std::vector<json>& records) {
  std::string buf;
  for (const json& r : records) {
    buf += r.dump(-1, ' ', false, json::error_handler_t::replace);
    buf += '\n';
  }
  write_file(path, buf);
}

std::vector<McqPair> read_pairs(const fs::path& path) {
  std::vector<McqPair> pairs;
  for (const Line& l : read_lines(path)) {
    try {
      pairs.push_back(parse(l.text));
    } catch (const ValidationError& e) {
      throw ValidationError(e.path(), path.string() + " line " +
                                          std::to_string(l.number) + ": " +
                                          e.message());
    }
  }
  return pairs;
}

void write_pairs(const fs::path& path, const std::vector<McqPair>& pairs) {
  std::string buf;
  for (const McqPair& p : pairs) {
    buf += serialize(p);
    buf += '\n';
  }
  write_file(path, buf);
}

void write_json(const fs::path& path, const json& doc) {
  write_file(path, doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n");
}

json read_json(const fs::path& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError(path.string() + ": malformed JSON");
  return j;
}

void append_line(const fs::path& path, std::string_view line) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw ConfigError("cannot append to " + path.string());
  out << line << '\n';
  out.flush();
}

}  // namespace rac::io
