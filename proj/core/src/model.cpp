#include "rac/model.hpp"

#include <openssl/evp.h>

#include <set>
#include <unordered_set>

#include "rac/error.hpp"
#include "rac/text.hpp"

#ifndef RAC_VERSION
#define RAC_VERSION "0.0.0"
#endif

namespace rac {
namespace {

const std::set<std::string> kRecordFields = {
    "answer",    "choices", "explanations", "id",
    "question", "rephrase", "source",      "subdomain"};

std::string Dump(const json& j) {
  try {
    return j.dump(-1, ' ', false, json::error_handler_t::strict);
  } catch (const json::type_error& e) {
    throw ValidationError("", std::string("invalid UTF-8 in record: ") + e.what());
  }
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  return text::hex(digest, len);
}

json LabelMap(const std::array<std::string, 4>& values) {
  json obj = json::object();
  for (Label l : kLabels) obj[to_string(l)] = values[index_of(l)];
  return obj;
}

const std::string& RequireString(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected string");
  return j.get_ref<const std::string&>();
}

std::optional<std::string> OptionalString(const json& j,
                                          const std::string& path) {
  if (j.is_null()) return std::nullopt;
  return RequireString(j, path);
}

Label RequireLabel(const json& j, const std::string& path) {
  const std::string& s = RequireString(j, path);
  auto l = parse_label(s);
  if (!l) {
    throw ValidationError(
        path, "unknown label \"" + s + "\"; expected one of A, B, C, D");
  }
  return *l;
}

void RejectUnknownLabels(const json& obj, const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (!parse_label(key)) {
      throw ValidationError(path + "." + key,
                            "unknown label; expected one of A, B, C, D");
    }
  }
}

Source ParseSource(const json& j) {
  if (!j.is_object()) throw ValidationError("source", "expected object or null");
  Source src;
  for (const auto& [key, _] : j.items()) {
    if (key != "book_id" && key != "section_path" && key != "batch_id") {
      throw ValidationError("source." + key, "unknown field");
    }
  }
  for (const char* key : {"book_id", "section_path", "batch_id"}) {
    if (!j.contains(key)) throw ValidationError(std::string("source.") + key, "missing");
  }
  src.book_id = RequireString(j.at("book_id"), "source.book_id");
  src.batch_id = RequireString(j.at("batch_id"), "source.batch_id");
  const json& path = j.at("section_path");
  if (!path.is_array()) throw ValidationError("source.section_path", "expected array");
  for (std::size_t i = 0; i < path.size(); ++i) {
    src.section_path.push_back(
        RequireString(path[i], "source.section_path[" + std::to_string(i) + "]"));
  }
  return src;
}

}  // namespace

std::string to_string(Label l) { return std::string(1, to_char(l)); }

std::optional<Label> parse_label(std::string_view s) {
  if (s.size() != 1 || s[0] < 'A' || s[0] > 'D') return std::nullopt;
  return label_at(static_cast<std::size_t>(s[0] - 'A'));
}

std::string Issue::to_string() const {
  std::string out = id.empty() ? std::string() : id + " ";
  out += path.empty() ? message : path + ": " + message;
  return out;
}

std::vector<Issue> structural_issues(const McqPair& pair) {
  std::vector<Issue> issues;
  auto add = [&](std::string path, std::string message) {
    issues.push_back({pair.id, std::move(path), std::move(message)});
  };
  if (text::trim(pair.question).empty()) add("question", "empty");
  std::array<std::string, 4> norm;
  for (Label l : kLabels) {
    if (text::trim(pair.choice(l)).empty()) {
      add("choices." + to_string(l), "empty");
    }
    norm[index_of(l)] = text::normalize(pair.choice(l));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (!norm[i].empty() && norm[i] == norm[j]) {
        add("choices", "duplicate " + to_string(label_at(i)) + "/" +
                           to_string(label_at(j)));
      }
    }
  }
  if (pair.rephrase && text::trim(*pair.rephrase).empty()) {
    add("rephrase", "empty");
  }
  if (pair.rephrase && pair.explanations.size() != 4) {
    add("explanations", "incomplete");
  } else if (!pair.rephrase && !pair.explanations.empty()) {
    add("rephrase", "missing while explanations are present");
  }
  for (const auto& [l, e] : pair.explanations) {
    if (text::trim(e).empty()) add("explanations." + to_string(l), "empty");
  }
  return issues;
}

void check_structure(const McqPair& pair) {
  auto issues = structural_issues(pair);
  if (!issues.empty()) {
    throw ValidationError(issues.front().path, issues.front().message);
  }
}

std::string compute_id(const McqPair& pair) {
  check_structure(pair);
  json canon = json::object();
  canon["answer"] = to_string(pair.correct_label);
  canon["choices"] = LabelMap(pair.choices);
  canon["question"] = pair.question;
  return Sha256Hex(Dump(canon));
}

McqPair with_id(McqPair pair) {
  pair.id = compute_id(pair);
  return pair;
}

json to_json(const McqPair& pair) {
  json j = json::object();
  j["id"] = pair.id;
  j["question"] = pair.question;
  j["choices"] = LabelMap(pair.choices);
  j["answer"] = to_string(pair.correct_label);
  j["rephrase"] = pair.rephrase ? json(*pair.rephrase) : json(nullptr);
  if (pair.explanations.empty()) {
    j["explanations"] = nullptr;
  } else {
    json e = json::object();
    for (const auto& [l, text] : pair.explanations) e[to_string(l)] = text;
    j["explanations"] = std::move(e);
  }
  j["subdomain"] = pair.subdomain ? json(*pair.subdomain) : json(nullptr);
  if (pair.source) {
    j["source"] = {{"book_id", pair.source->book_id},
                   {"section_path", pair.source->section_path},
                   {"batch_id", pair.source->batch_id}};
  } else {
    j["source"] = nullptr;
  }
  return j;
}

std::string serialize(const McqPair& pair) { return Dump(to_json(pair)); }

McqPair from_json(const json& record, const ParseOptions& opts) {
  if (!record.is_object()) throw ValidationError("", "record is not a JSON object");
  for (const auto& [key, _] : record.items()) {
    if (!kRecordFields.contains(key)) throw ValidationError(key, "unknown field");
  }
  for (const std::string& key : kRecordFields) {
    const bool optional_here =
        !opts.require_all_fields &&
        (key == "id" || key == "subdomain" || key == "source" ||
         key == "rephrase" || key == "explanations");
    if (!record.contains(key) && !optional_here) {
      throw ValidationError(key, "missing");
    }
  }

  McqPair pair;
  if (record.contains("id") && !record.at("id").is_null()) {
    pair.id = RequireString(record.at("id"), "id");
  } else if (opts.require_all_fields) {
    throw ValidationError("id", "expected string");
  }
  pair.question = RequireString(record.at("question"), "question");

  const json& choices = record.at("choices");
  if (!choices.is_object()) throw ValidationError("choices", "expected object");
  RejectUnknownLabels(choices, "choices");
  for (Label l : kLabels) {
    const std::string path = "choices." + to_string(l);
    if (!choices.contains(to_string(l))) throw ValidationError(path, "missing");
    pair.choices[index_of(l)] = RequireString(choices.at(to_string(l)), path);
  }

  pair.correct_label = RequireLabel(record.at("answer"), "answer");

  if (record.contains("rephrase")) {
    pair.rephrase = OptionalString(record.at("rephrase"), "rephrase");
  }
  if (record.contains("explanations") && !record.at("explanations").is_null()) {
    const json& ex = record.at("explanations");
    if (!ex.is_object()) throw ValidationError("explanations", "expected object or null");
    RejectUnknownLabels(ex, "explanations");
    for (Label l : kLabels) {
      if (ex.contains(to_string(l))) {
        pair.explanations[l] = RequireString(ex.at(to_string(l)),
                                             "explanations." + to_string(l));
      } else if (opts.check_invariants) {
        throw ValidationError("explanations." + to_string(l), "missing");
      }
    }
  }
  if (record.contains("subdomain")) {
    pair.subdomain = OptionalString(record.at("subdomain"), "subdomain");
  }
  if (record.contains("source") && !record.at("source").is_null()) {
    pair.source = ParseSource(record.at("source"));
  }

  if (opts.check_invariants) {
    check_structure(pair);
    if (!pair.id.empty() && pair.id != compute_id(pair)) {
      throw ValidationError("id", "does not match content hash");
    }
  }
  return pair;
}

McqPair parse(std::string_view record, const ParseOptions& opts) {
  json j = json::parse(record.begin(), record.end(), nullptr, false);
  if (j.is_discarded()) throw ValidationError("", "malformed JSON record");
  return from_json(j, opts);
}

std::string to_string(Tier t) {
  switch (t) {
    case Tier::kEasy: return "easy";
    case Tier::kHard: return "hard";
    case Tier::kComprehensive: return "comprehensive";
  }
  return "easy";
}

Tier parse_tier(std::string_view s) {
  if (s == "easy") return Tier::kEasy;
  if (s == "hard") return Tier::kHard;
  if (s == "comprehensive") return Tier::kComprehensive;
  throw ConfigError("unknown tier \"" + std::string(s) +
                    "\"; expected easy, hard or comprehensive");
}

json to_json(const Provenance& p) {
  json j = json::object();
  j["parents"] = p.parents;
  j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
  j["sample_sizes"] = p.sample_sizes;
  j["note"] = p.note;
  return j;
}

std::vector<std::string> duplicate_ids(const std::vector<McqPair>& pairs) {
  std::unordered_set<std::string> seen, reported;
  std::vector<std::string> dups;
  for (const McqPair& p : pairs) {
    if (!seen.insert(p.id).second && reported.insert(p.id).second) {
      dups.push_back(p.id);
    }
  }
  return dups;
}

void check_problem_set(const ProblemSet& set) {
  auto dups = duplicate_ids(set.pairs);
  if (!dups.empty()) {
    throw ValidationError("pairs", "duplicate id " + dups.front() + " in set " + set.name);
  }
  if (set.tier == Tier::kComprehensive &&
      (!set.created_from.seed || set.created_from.parents.size() != 2)) {
    throw ValidationError("created_from",
                          "comprehensive sets must record a seed and two parent sets");
  }
}

json to_json(const DatasetManifest& m) {
  json j = json::object();
  j["counts"] = {{"raw", m.raw},
                 {"validated", m.validated},
                 {"test", m.test},
                 {"train_pre_augment", m.train_pre_augment},
                 {"train_augmented", m.train_augmented}};
  j["choiceboost_applied"] = m.choiceboost_applied;
  j["split_seed"] = m.split_seed;
  j["split_fraction"] = m.split_fraction;
  j["taxonomy"] = m.taxonomy;
  j["tool_version"] = m.tool_version;
  return j;
}

void check_manifest(const DatasetManifest& m) {
  if (m.test + m.train_pre_augment != m.validated) {
    throw ValidationError("counts", "test + train_pre_augment != validated");
  }
  if (m.choiceboost_applied && m.train_augmented != 4 * m.train_pre_augment) {
    throw ValidationError("counts.train_augmented", "expected 4 x train_pre_augment");
  }
}

std::string_view tool_version() { return RAC_VERSION; }

}  // namespace rac
