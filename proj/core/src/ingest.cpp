#include "rac/ingest.hpp"

#include "rac/error.hpp"
#include "rac/io.hpp"
#include "rac/text.hpp"

namespace rac::ingest {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsBlank(std::string_view line) { return text::trim(line).empty(); }

std::string StripControl(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if ((u < 0x20 && c != '\n' && c != '\t') || u == 0x7F) continue;
    out.push_back(c);
  }
  return out;
}

// Heading level (1-6) and title, or level 0 for body lines.
std::pair<int, std::string_view> ParseHeading(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '#') ++n;
  if (n == 0 || n > 6) return {0, {}};
  if (n < line.size() && line[n] != ' ' && line[n] != '\t') return {0, {}};
  std::string_view title = text::trim(line.substr(n));
  while (!title.empty() && title.back() == '#') title.remove_suffix(1);
  return {static_cast<int>(n), text::trim(title)};
}

class Packer {
 public:
  Packer(std::string_view body, std::size_t budget)
      : body_(body), budget_(budget), cp_(body.size() + 1, 0) {
    // cp_[i] = code points that start before byte i.
    std::size_t count = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if ((static_cast<unsigned char>(body[i]) & 0xC0) != 0x80) ++count;
      cp_[i + 1] = count;
    }
  }

  std::vector<Span> run() {
    const Span all{0, body_.size()};
    if (all.end == 0) return {};
    if (Estimate(all) <= budget_) return {all};
    Pack(all, 0);
    return std::move(out_);
  }

 private:
  std::size_t Estimate(Span s) const {
    return (cp_[s.end] - cp_[s.begin] + 3) / 4;
  }

  void Pack(Span range, int level) {
    if (level >= 2) {
      HardSplit(range);
      return;
    }
    std::optional<Span> cur;
    for (const Span& u : Units(range, level)) {
      if (Estimate(u) > budget_) {
        if (cur) out_.push_back(*cur);
        cur.reset();
        Pack(u, level + 1);
        continue;
      }
      if (!cur) {
        cur = u;
      } else if (Estimate({cur->begin, u.end}) <= budget_) {
        cur->end = u.end;
      } else {
        out_.push_back(*cur);
        cur = u;
      }
    }
    if (cur) out_.push_back(*cur);
  }

  // Level 0: paragraphs, separated by whitespace runs holding two or more
  // newlines. Level 1: sentences, separated by whitespace after . ! or ?
  // (optionally followed by a closing quote or bracket).
  std::vector<Span> Units(Span range, int level) const {
    std::vector<Span> units;
    std::size_t start = range.begin;
    std::size_t i = range.begin;
    while (i < range.end) {
      if (!IsSpace(body_[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      std::size_t newlines = 0;
      while (j < range.end && IsSpace(body_[j])) {
        if (body_[j] == '\n') ++newlines;
        ++j;
      }
      bool sep = false;
      if (level == 0) {
        sep = newlines >= 2;
      } else {
        std::size_t k = i;
        while (k > start && (body_[k - 1] == '"' || body_[k - 1] == '\'' ||
                             body_[k - 1] == ')' || body_[k - 1] == ']')) {
          --k;
        }
        sep = k > start &&
              (body_[k - 1] == '.' || body_[k - 1] == '!' || body_[k - 1] == '?');
      }
      if (sep && i > start && j < range.end) {
        units.push_back({start, i});
        start = j;
      }
      i = j;
    }
    if (start < range.end) units.push_back({start, range.end});
    return units;
  }

  void HardSplit(Span range) {
    const std::size_t max_cp = budget_ * 4;
    std::size_t start = range.begin;
    while (start < range.end) {
      const std::string_view rest = body_.substr(start, range.end - start);
      const std::size_t window_end = start + text::prefix_bytes(rest, max_cp);
      if (window_end >= range.end) {
        out_.push_back({start, range.end});
        return;
      }
      // Prefer the last whitespace run reaching into the window.
      std::size_t p = window_end;
      while (p > start && !IsSpace(body_[p])) --p;
      if (p > start) {
        std::size_t ws_begin = p;
        while (ws_begin > start && IsSpace(body_[ws_begin - 1])) --ws_begin;
        std::size_t ws_end = p;
        while (ws_end < range.end && IsSpace(body_[ws_end])) ++ws_end;
        if (ws_begin > start) {
          out_.push_back({start, ws_begin});
          start = ws_end;
          continue;
        }
      }
      out_.push_back({start, window_end});
      start = window_end;
    }
  }

  std::string_view body_;
  std::size_t budget_;
  std::vector<std::size_t> cp_;
  std::vector<Span> out_;
};

}  // namespace

std::vector<std::regex> CleanOptions::default_caption_patterns() {
  return {std::regex(R"(^\s*(Figure|Fig\.|Table)\s*\d+)")};
}

std::vector<std::regex> CleanOptions::default_image_patterns() {
  return {
      std::regex(R"(!\[[^\]\n]*\]\([^)\n]*\))"),
      std::regex(R"(<img\b[^>\n]*>)", std::regex::icase),
      std::regex(R"(\[(image|img|figure|picture)\b[^\]\n]*\])", std::regex::icase),
  };
}

std::string clean_text(std::string_view raw, const CleanOptions& opts) {
  const std::string stripped = StripControl(text::sanitize_utf8(raw));

  std::vector<std::string> kept;
  for (std::string_view line : text::split_lines(stripped)) {
    std::string l(line);
    bool caption = false;
    for (const auto& re : opts.caption_patterns) {
      if (std::regex_search(l, re)) {
        caption = true;
        break;
      }
    }
    if (caption) continue;
    if (!opts.image_patterns.empty()) {
      const bool was_blank = IsBlank(l);
      for (const auto& re : opts.image_patterns) l = std::regex_replace(l, re, "");
      // A line that only held image markers goes away entirely.
      if (!was_blank && IsBlank(l)) continue;
    }
    kept.push_back(std::move(l));
  }

  std::vector<std::string_view> lines;
  for (std::size_t i = 0; i < kept.size();) {
    std::size_t j = i;
    while (j < kept.size() && IsBlank(kept[j])) ++j;
    if (j - i >= 3) {
      lines.emplace_back();
      i = j;
      continue;
    }
    for (; i < j; ++i) lines.push_back(kept[i]);
    if (i < kept.size()) lines.push_back(kept[i++]);
  }

  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += '\n';
    out += lines[i];
  }
  return out;
}

std::size_t estimate_tokens(std::string_view t) {
  return (text::code_points(t) + 3) / 4;
}

std::vector<Section> split_sections(std::string_view cleaned) {
  std::vector<Section> sections;
  std::vector<std::pair<int, std::string>> stack;
  std::string body;
  bool seen_heading = false;

  auto flush = [&] {
    std::vector<std::string> path;
    for (const auto& [_, title] : stack) path.push_back(title);
    std::string trimmed(text::trim(body));
    if (seen_heading || !trimmed.empty()) {
      sections.push_back({std::move(path), std::move(trimmed)});
    }
    body.clear();
  };

  bool first_line = true;
  for (std::string_view line : text::split_lines(cleaned)) {
    auto [level, title] = ParseHeading(line);
    if (level > 0) {
      flush();
      seen_heading = true;
      while (!stack.empty() && stack.back().first >= level) stack.pop_back();
      stack.emplace_back(level, std::string(title));
      first_line = true;
      continue;
    }
    if (!first_line) body += '\n';
    body += line;
    first_line = false;
  }
  flush();
  return sections;
}

std::vector<Span> pack_section(std::string_view body, std::size_t budget) {
  if (budget < kMinBudget) {
    throw ConfigError("segment budget must be >= " + std::to_string(kMinBudget) +
                      ", got " + std::to_string(budget));
  }
  return Packer(body, budget).run();
}

std::vector<CorpusSegment> segment(const RawDocument& doc, std::size_t budget,
                                   const CleanOptions& opts) {
  if (budget < kMinBudget) {
    throw ConfigError("segment budget must be >= " + std::to_string(kMinBudget) +
                      ", got " + std::to_string(budget));
  }
  std::vector<CorpusSegment> out;
  for (const Section& sec : split_sections(clean_text(doc.text, opts))) {
    for (const Span& s : pack_section(sec.body, budget)) {
      CorpusSegment seg;
      seg.book_id = doc.book_id;
      seg.section_path = sec.path;
      seg.text = sec.body.substr(s.begin, s.end - s.begin);
      seg.token_estimate = estimate_tokens(seg.text);
      out.push_back(std::move(seg));
    }
  }
  return out;
}

json to_json(const CorpusSegment& s) {
  return {{"book_id", s.book_id},
          {"section_path", s.section_path},
          {"text", s.text},
          {"token_estimate", s.token_estimate}};
}

CorpusSegment segment_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("", "segment record is not an object");
  for (const char* key : {"book_id", "section_path", "text", "token_estimate"}) {
    if (!j.contains(key)) throw ValidationError(key, "missing");
  }
  CorpusSegment s;
  try {
    s.book_id = j.at("book_id").get<std::string>();
    s.section_path = j.at("section_path").get<std::vector<std::string>>();
    s.text = j.at("text").get<std::string>();
    s.token_estimate = j.at("token_estimate").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ValidationError("", std::string("bad segment record: ") + e.what());
  }
  if (text::trim(s.text).empty()) throw ValidationError("text", "empty");
  if (s.token_estimate != estimate_tokens(s.text)) {
    throw ValidationError("token_estimate", "does not match text");
  }
  return s;
}

std::vector<CorpusSegment> read_segments(const std::filesystem::path& path) {
  std::vector<CorpusSegment> out;
  for (const json& j : io::read_jsonl(path)) out.push_back(segment_from_json(j));
  return out;
}

void write_segments(const std::filesystem::path& path,
                    const std::vector<CorpusSegment>& segments) {
  std::vector<json> records;
  records.reserve(segments.size());
  for (const auto& s : segments) records.push_back(to_json(s));
  io::write_jsonl(path, records);
}

std::vector<RawDocument> load_corpus(const std::filesystem::path& manifest) {
  const json m = io::read_json(manifest);
  if (!m.is_object()) {
    throw ConfigError(manifest.string() + ": expected an object mapping file -> book_id");
  }
  const auto dir = manifest.parent_path();
  std::vector<RawDocument> docs;
  for (const auto& [file, entry] : m.items()) {
    RawDocument doc;
    if (entry.is_string()) {
      doc.book_id = entry.get<std::string>();
    } else if (entry.is_object() && entry.contains("book_id") &&
               entry.at("book_id").is_string()) {
      doc.book_id = entry.at("book_id").get<std::string>();
      if (entry.contains("title") && entry.at("title").is_string()) {
        doc.title = entry.at("title").get<std::string>();
      }
      if (entry.contains("edition") && entry.at("edition").is_string()) {
        doc.edition = entry.at("edition").get<std::string>();
      }
    } else {
      throw ConfigError(manifest.string() + ": entry for " + file +
                        " must be a book id string or an object with book_id");
    }
    doc.text = io::read_file(dir / file);
    if (doc.text.empty()) throw ConfigError(file + ": empty document");
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace rac::ingest
