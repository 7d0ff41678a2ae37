#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rac/model.hpp"

namespace rac::curation {

inline constexpr std::size_t kMinQuestionLength = 10;

struct ValidationResult {
  std::vector<McqPair> valid;
  std::vector<Issue> issues;
};

// Core invariants plus: question of at least 10 characters, no choice equal
// to the question, id matching the content hash. Valid pairs pass through
// unchanged. Total.
ValidationResult validate(const std::vector<McqPair>& pairs);

// Drops later pairs whose normalized question matches an earlier one.
std::vector<McqPair> dedupe(const std::vector<McqPair>& pairs);

// Drops later pairs with an id already seen.
std::vector<McqPair> dedupe_by_id(const std::vector<McqPair>& pairs);

// ChoiceBoost: four variants with the correct text at A, B, C, D in turn and
// the three distractors packed around it in their original order.
// Explanations follow their choice texts. Throws ValidationError on an
// invalid pair.
std::array<McqPair, 4> choiceboost(const McqPair& pair);

// choiceboost over a dataset, variants of each pair kept together.
std::vector<McqPair> choiceboost_all(const std::vector<McqPair>& pairs);

struct BiasReport {
  std::array<std::size_t, 4> counts{};
  std::size_t total = 0;
  std::array<double, 4> frequency{};
  // Total-variation distance of the answer-label distribution to uniform,
  // in [0, 0.75].
  double tv_distance = 0.0;
};

// Throws ValidationError("empty dataset") for empty input.
BiasReport position_bias(const std::vector<McqPair>& pairs);
json to_json(const BiasReport& r);

struct Split {
  std::vector<McqPair> train;
  std::vector<McqPair> test;
};

// round-half-up(n * fraction).
std::size_t test_size(std::size_t n, double fraction);

// Sorts ids, shuffles them with the seed and takes the first test_size as the
// test side. Input order is kept within each side. Throws ConfigError for a
// fraction outside (0, 1) or a test size of 0 or n, ValidationError for
// duplicate ids.
Split split(const std::vector<McqPair>& pairs, double test_fraction,
            std::uint64_t seed);

enum class SftStyle { kRac, kPlain };
SftStyle parse_style(std::string_view s);

inline constexpr std::string_view kAnswerInstruction =
    "Answer with the letter of the correct option.";

// Question, then "A. ..".."D. .." one per line, then the instruction.
std::string render_question(const McqPair& pair);

struct SftRecord {
  std::string prompt;
  std::string response;
  std::string id;
  Label answer = Label::A;
  std::optional<std::string> subdomain;
};

json to_json(const SftRecord& r);

// rac: "Rephrase: ..", "Analysis:" with the correct option's explanation then
// the incorrect ones in label order, "Answer: X". plain: "Answer: X" only.
// Throws ValidationError listing ids when style is rac and a pair is not
// RaC-complete.
std::vector<SftRecord> export_sft(const std::vector<McqPair>& pairs, SftStyle style);

// Label on the final "Answer: X" line of an exported response.
std::optional<Label> parse_sft_answer(std::string_view response);

}  // namespace rac::curation
