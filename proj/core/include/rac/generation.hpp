#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rac/ingest.hpp"
#include "rac/model.hpp"
#include "rac/provider.hpp"

namespace rac::gen {

struct GenerationConfig {
  double temperature = 1.0;
  double top_p = 1.0;
  double frequency_penalty = 0.0;
  double presence_penalty = 0.0;
  std::string model = "gpt-4";
  int questions_per_segment = 3;
  int max_retries = 3;
  int parallelism = 4;
  RetryPolicy backoff;

  // Throws ConfigError on out-of-range values.
  void validate() const;
  ChatRequest request(std::string prompt) const;
};

// Lines delimiting the passage inside a prompt.
inline constexpr std::string_view kPassageBegin = "<<<PASSAGE>>>";
inline constexpr std::string_view kPassageEnd = "<<<END PASSAGE>>>";

// Prompt sections, in the order they appear.
inline constexpr std::string_view kTaskHeading = "## Task";
inline constexpr std::string_view kRequirementsHeading = "## Requirements";
inline constexpr std::string_view kStrategyHeading = "## Explanation strategy";
inline constexpr std::string_view kFormatHeading = "## Output format";
inline constexpr std::string_view kPassageHeading = "## Passage";

// Prefixes a backslash to any passage line that could be read as a fence
// line (lines starting with "<<<" after leading backslashes).
std::string escape_passage(std::string_view text);
std::string unescape_passage(std::string_view text);

std::string build_prompt(const ingest::CorpusSegment& segment,
                         const GenerationConfig& cfg);

// The original prompt plus a correction block quoting the parse error.
std::string build_retry_prompt(std::string_view prompt, std::string_view error);

// Unescaped text of the single fenced passage region, or nullopt when the
// prompt does not contain exactly one.
std::optional<std::string> extract_passage(std::string_view prompt);

// Number stated on the "Number of questions:" line, if any.
std::optional<int> requested_count(std::string_view prompt);

// Accepts exactly one ```jsonl fenced block holding one record per line.
// Every record must be RaC-complete; ids are assigned. Throws
// ValidationError naming the field path, question number and response line,
// or "got N, expected M" on count mismatch.
std::vector<McqPair> parse_generation(std::string_view response,
                                      std::size_t expected_count);

// Deterministic offline provider: the response depends only on (seed,
// prompt), is always grammar-conformant and is derived from the passage.
class MockProvider final : public ChatProvider {
 public:
  explicit MockProvider(std::uint64_t seed) : seed_(seed) {}
  std::string complete(const ChatRequest& request) override;
  std::string name() const override { return "mock"; }

 private:
  std::uint64_t seed_;
};

struct GenerationBatchRecord {
  std::string batch_id;
  std::size_t segment_index = 0;
  std::string book_id;
  std::vector<std::string> section_path;
  std::string raw_response;
  bool ok = false;
  std::string error;
  std::size_t pair_count = 0;
  int attempts = 0;
  std::string started_at;
  std::string finished_at;
};

json to_json(const GenerationBatchRecord& r);

struct GenerationResult {
  std::vector<McqPair> pairs;
  std::vector<GenerationBatchRecord> records;

  std::size_t failures() const;
};

// Stable batch id for a segment at a given position.
std::string batch_id_for(const ingest::CorpusSegment& segment, std::size_t index);

// One request per segment, up to cfg.parallelism in flight. Parse failures
// are re-prompted with the error; retryable provider errors back off.
// Output pairs follow (segment order, in-response order).
GenerationResult generate_pairs(const std::vector<ingest::CorpusSegment>& segments,
                                const GenerationConfig& cfg, ChatProvider& provider,
                                const Sleeper& sleep = real_sleeper());

}  // namespace rac::gen
