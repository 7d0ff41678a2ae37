#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "rac/model.hpp"

namespace rac::ingest {

inline constexpr std::size_t kDefaultBudget = 3000;
inline constexpr std::size_t kMinBudget = 64;

// Extracted book text. Headings are markdown `#` lines.
struct RawDocument {
  std::string book_id;
  std::string text;
  std::optional<std::string> title;
  std::optional<std::string> edition;
};

struct CorpusSegment {
  std::string book_id;
  std::vector<std::string> section_path;
  std::string text;
  std::size_t token_estimate = 0;

  bool operator==(const CorpusSegment&) const = default;
};

struct CleanOptions {
  // Whole lines matching any of these are dropped. Default: lines starting
  // with "Figure", "Fig." or "Table" followed by a number.
  std::vector<std::regex> caption_patterns = default_caption_patterns();
  // Inline image placeholders removed wherever they occur.
  std::vector<std::regex> image_patterns = default_image_patterns();

  static std::vector<std::regex> default_caption_patterns();
  static std::vector<std::regex> default_image_patterns();
};

// Removes captions, image placeholders and control characters (except
// newline and tab), collapses runs of three or more blank lines into one and
// drops invalid UTF-8. Total.
std::string clean_text(std::string_view raw, const CleanOptions& opts = {});

// ceil(code points / 4). A heuristic, not a tokenizer.
std::size_t estimate_tokens(std::string_view text);

struct Section {
  std::vector<std::string> path;
  std::string body;  // cleaned, trimmed
};

// Splits cleaned text at heading lines. Text before the first heading gets
// an empty path. Sections with an empty body are kept here.
std::vector<Section> split_sections(std::string_view cleaned);

// Cleans `doc.text`, splits it into sections and packs every section into
// segments of at most `budget` estimated tokens: whole section if it fits,
// else greedy paragraphs, then sentences, then a hard split at a word or
// character boundary. Segment texts are contiguous pieces of the section
// body; only whitespace lies between consecutive pieces.
// Throws ConfigError when budget < 64.
std::vector<CorpusSegment> segment(const RawDocument& doc,
                                   std::size_t budget = kDefaultBudget,
                                   const CleanOptions& opts = {});

// Pieces of one section body, as [begin, end) byte offsets.
struct Span {
  std::size_t begin;
  std::size_t end;
};
std::vector<Span> pack_section(std::string_view body, std::size_t budget);

json to_json(const CorpusSegment& s);
CorpusSegment segment_from_json(const json& j);

std::vector<CorpusSegment> read_segments(const std::filesystem::path& path);
void write_segments(const std::filesystem::path& path,
                    const std::vector<CorpusSegment>& segments);

// Manifest: JSON object mapping a file name (relative to the manifest's
// directory) to a book id string or to {"book_id", "title", "edition"}.
std::vector<RawDocument> load_corpus(const std::filesystem::path& manifest);

}  // namespace rac::ingest
