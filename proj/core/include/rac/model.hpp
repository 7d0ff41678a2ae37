#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rac {

using json = nlohmann::json;

enum class Label : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };

inline constexpr std::array<Label, 4> kLabels = {Label::A, Label::B, Label::C,
                                                 Label::D};

constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }
constexpr Label label_at(std::size_t i) { return static_cast<Label>(i); }
constexpr char to_char(Label l) { return static_cast<char>('A' + index_of(l)); }
std::string to_string(Label l);

// Accepts exactly "A".."D" (upper case).
std::optional<Label> parse_label(std::string_view s);

struct Source {
  std::string book_id;
  std::vector<std::string> section_path;
  std::string batch_id;

  bool operator==(const Source&) const = default;
};

// One multiple-choice question. `explanations` is keyed by the label of the
// choice it explains; a RaC-complete pair has a rephrase and all four.
struct McqPair {
  std::string id;
  std::string question;
  std::array<std::string, 4> choices;
  Label correct_label = Label::A;
  std::optional<std::string> rephrase;
  std::map<Label, std::string> explanations;
  std::optional<std::string> subdomain;
  std::optional<Source> source;

  const std::string& choice(Label l) const { return choices[index_of(l)]; }
  const std::string& correct_text() const { return choice(correct_label); }
  bool rac_complete() const {
    return rephrase.has_value() && explanations.size() == 4;
  }

  bool operator==(const McqPair&) const = default;
};

// A problem found in a pair. `id` is the pair id, or "line:N" for records
// that could not be read far enough to have one.
struct Issue {
  std::string id;
  std::string path;
  std::string message;

  std::string to_string() const;
  bool operator==(const Issue&) const = default;
};

// Structural invariants that do not involve the id: non-empty question and
// choices, pairwise-distinct normalized choices, all-or-nothing RaC
// annotation, non-empty explanation texts.
std::vector<Issue> structural_issues(const McqPair& pair);

// Throws ValidationError for the first structural issue.
void check_structure(const McqPair& pair);

// SHA-256 (lowercase hex) of the canonical JSON of {answer, choices,
// question}. Rephrase, explanations, subdomain and source are not hashed.
std::string compute_id(const McqPair& pair);

// Returns `pair` with its id recomputed. Validates structure first.
McqPair with_id(McqPair pair);

json to_json(const McqPair& pair);

// Canonical single-line record: sorted keys, UTF-8, no trailing newline.
std::string serialize(const McqPair& pair);

struct ParseOptions {
  // Record files carry all eight fields; generation output may omit `id`,
  // `subdomain` and `source`.
  bool require_all_fields = true;
  // Check structural invariants and that `id` matches the content hash.
  bool check_invariants = true;
};

// Throws ValidationError naming the field path.
McqPair from_json(const json& record, const ParseOptions& opts = {});
McqPair parse(std::string_view record, const ParseOptions& opts = {});

enum class Tier { kEasy, kHard, kComprehensive };

std::string to_string(Tier t);
Tier parse_tier(std::string_view s);

struct Provenance {
  std::vector<std::string> parents;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> sample_sizes;
  std::string note;

  bool operator==(const Provenance&) const = default;
};

struct ProblemSet {
  std::string name;
  Tier tier = Tier::kEasy;
  std::vector<McqPair> pairs;
  Provenance created_from;
};

json to_json(const Provenance& p);

// Returns the ids that occur more than once, in first-repeat order.
std::vector<std::string> duplicate_ids(const std::vector<McqPair>& pairs);

// Throws ValidationError when ids repeat or a comprehensive set lacks its
// seed or two parent names.
void check_problem_set(const ProblemSet& set);

struct DatasetManifest {
  std::size_t raw = 0;
  std::size_t validated = 0;
  std::size_t test = 0;
  std::size_t train_pre_augment = 0;
  std::size_t train_augmented = 0;
  bool choiceboost_applied = false;
  std::uint64_t split_seed = 0;
  double split_fraction = 0.0;
  std::string taxonomy;
  std::string tool_version;
};

json to_json(const DatasetManifest& m);

// Throws ValidationError when the stage counts are inconsistent.
void check_manifest(const DatasetManifest& m);

// Version string baked in at build time.
std::string_view tool_version();

}  // namespace rac
