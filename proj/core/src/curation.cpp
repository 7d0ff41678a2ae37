#include "rac/curation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "rac/error.hpp"
#include "rac/random.hpp"
#include "rac/text.hpp"

namespace rac::curation {

ValidationResult validate(const std::vector<McqPair>& pairs) {
  ValidationResult out;
  for (const McqPair& p : pairs) {
    auto issues = structural_issues(p);
    auto add = [&](std::string path, std::string message) {
      issues.push_back({p.id, std::move(path), std::move(message)});
    };
    if (text::code_points(text::trim(p.question)) < kMinQuestionLength) {
      add("question", "shorter than " + std::to_string(kMinQuestionLength) + " characters");
    }
    const std::string q = text::normalize(p.question);
    for (Label l : kLabels) {
      if (!q.empty() && text::normalize(p.choice(l)) == q) {
        add("choices." + to_string(l), "equals the question");
      }
    }
    if (issues.empty() && p.id != compute_id(p)) {
      add("id", "does not match content hash");
    }
    if (issues.empty()) {
      out.valid.push_back(p);
    } else {
      for (auto& i : issues) out.issues.push_back(std::move(i));
    }
  }
  return out;
}

std::vector<McqPair> dedupe(const std::vector<McqPair>& pairs) {
  std::unordered_set<std::string> seen;
  std::vector<McqPair> out;
  for (const McqPair& p : pairs) {
    if (seen.insert(text::normalize(p.question)).second) out.push_back(p);
  }
  return out;
}

std::vector<McqPair> dedupe_by_id(const std::vector<McqPair>& pairs) {
  std::unordered_set<std::string> seen;
  std::vector<McqPair> out;
  for (const McqPair& p : pairs) {
    if (seen.insert(p.id).second) out.push_back(p);
  }
  return out;
}

std::array<McqPair, 4> choiceboost(const McqPair& pair) {
  check_structure(pair);
  // Original labels of the distractors, in label order.
  std::array<Label, 3> distractors{};
  std::size_t d = 0;
  for (Label l : kLabels) {
    if (l != pair.correct_label) distractors[d++] = l;
  }

  std::array<McqPair, 4> variants;
  for (Label target : kLabels) {
    McqPair v = pair;
    v.correct_label = target;
    v.explanations.clear();
    std::size_t next = 0;
    for (Label slot : kLabels) {
      const Label from = slot == target ? pair.correct_label : distractors[next++];
      v.choices[index_of(slot)] = pair.choice(from);
      if (auto it = pair.explanations.find(from); it != pair.explanations.end()) {
        v.explanations[slot] = it->second;
      }
    }
    if (v.choices != pair.choices || v.correct_label != pair.correct_label) {
      v.id = compute_id(v);
    }
    variants[index_of(target)] = std::move(v);
  }
  return variants;
}

std::vector<McqPair> choiceboost_all(const std::vector<McqPair>& pairs) {
  std::vector<McqPair> out;
  out.reserve(pairs.size() * 4);
  for (const McqPair& p : pairs) {
    for (auto& v : choiceboost(p)) out.push_back(std::move(v));
  }
  return out;
}

BiasReport position_bias(const std::vector<McqPair>& pairs) {
  if (pairs.empty()) throw ValidationError("", "empty dataset");
  BiasReport r;
  for (const McqPair& p : pairs) ++r.counts[index_of(p.correct_label)];
  r.total = pairs.size();
  // tv = 1/2 sum |c/N - 1/4| = sum |4c - N| / (8N); the integer numerator
  // keeps balanced and fully skewed inputs exact.
  std::uint64_t numer = 0;
  for (Label l : kLabels) {
    const std::size_t c = r.counts[index_of(l)];
    r.frequency[index_of(l)] = static_cast<double>(c) / static_cast<double>(r.total);
    const std::uint64_t four_c = 4 * static_cast<std::uint64_t>(c);
    numer += four_c > r.total ? four_c - r.total : r.total - four_c;
  }
  r.tv_distance = static_cast<double>(numer) / (8.0 * static_cast<double>(r.total));
  return r;
}

json to_json(const BiasReport& r) {
  json counts = json::object(), freq = json::object();
  for (Label l : kLabels) {
    counts[to_string(l)] = r.counts[index_of(l)];
    freq[to_string(l)] = r.frequency[index_of(l)];
  }
  return {{"counts", counts},
          {"total", r.total},
          {"frequency", freq},
          {"tv_distance", r.tv_distance}};
}

std::size_t test_size(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5));
}

Split split(const std::vector<McqPair>& pairs, double test_fraction,
            std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must be in (0, 1), got " +
                      std::to_string(test_fraction));
  }
  const std::size_t n = pairs.size();
  if (n == 0) throw ConfigError("cannot split an empty dataset");
  const std::size_t k = test_size(n, test_fraction);
  if (k == 0 || k == n) {
    throw ConfigError("test fraction " + std::to_string(test_fraction) + " of " +
                      std::to_string(n) + " pairs gives a test size of " +
                      std::to_string(k));
  }
  if (auto dups = duplicate_ids(pairs); !dups.empty()) {
    throw ValidationError("id", "duplicate id " + dups.front() + "; dedupe before splitting");
  }

  std::vector<std::string> ids;
  ids.reserve(n);
  for (const McqPair& p : pairs) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  SeededRng rng(seed);
  rng.shuffle(std::span<std::string>(ids));
  std::unordered_set<std::string> test_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k));

  Split s;
  s.test.reserve(k);
  s.train.reserve(n - k);
  for (const McqPair& p : pairs) {
    (test_ids.contains(p.id) ? s.test : s.train).push_back(p);
  }
  return s;
}

SftStyle parse_style(std::string_view s) {
  if (s == "rac") return SftStyle::kRac;
  if (s == "plain") return SftStyle::kPlain;
  throw ConfigError("unknown style \"" + std::string(s) + "\"; expected rac or plain");
}

std::string render_question(const McqPair& pair) {
  std::string out = std::string(text::trim(pair.question));
  out += '\n';
  for (Label l : kLabels) {
    out += to_char(l);
    out += ". ";
    out += text::single_line(text::trim(pair.choice(l)));
    out += '\n';
  }
  out += kAnswerInstruction;
  return out;
}

json to_json(const SftRecord& r) {
  return {{"prompt", r.prompt},
          {"response", r.response},
          {"meta",
           {{"id", r.id},
            {"answer", to_string(r.answer)},
            {"subdomain", r.subdomain ? json(*r.subdomain) : json(nullptr)}}}};
}

std::vector<SftRecord> export_sft(const std::vector<McqPair>& pairs, SftStyle style) {
  if (style == SftStyle::kRac) {
    std::vector<std::string> bad;
    for (const McqPair& p : pairs) {
      if (!p.rac_complete()) bad.push_back(p.id);
    }
    if (!bad.empty()) {
      std::string ids;
      for (const auto& id : bad) ids += (ids.empty() ? "" : ", ") + id;
      throw ValidationError("", "pairs are not RaC-complete: " + ids);
    }
  }
  std::vector<SftRecord> out;
  out.reserve(pairs.size());
  for (const McqPair& p : pairs) {
    SftRecord r;
    r.prompt = render_question(p);
    r.id = p.id;
    r.answer = p.correct_label;
    r.subdomain = p.subdomain;
    if (style == SftStyle::kRac) {
      r.response = "Rephrase: " + text::single_line(text::trim(*p.rephrase)) + "\n";
      r.response += "Analysis:\n";
      auto line = [&](Label l) {
        r.response += to_char(l);
        r.response += ". ";
        r.response += text::single_line(text::trim(p.explanations.at(l)));
        r.response += '\n';
      };
      line(p.correct_label);
      for (Label l : kLabels) {
        if (l != p.correct_label) line(l);
      }
    }
    r.response += "Answer: " + to_string(p.correct_label);
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<Label> parse_sft_answer(std::string_view response) {
  const auto lines = text::split_lines(response);
  if (lines.empty()) return std::nullopt;
  std::string_view last = text::trim(lines.back());
  if (!last.starts_with("Answer: ")) return std::nullopt;
  return parse_label(last.substr(8));
}

}  // namespace rac::curation
