#include "rac/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <regex>
#include <thread>
#include <unordered_set>

#include "rac/error.hpp"
#include "rac/random.hpp"
#include "rac/taxonomy.hpp"
#include "rac/text.hpp"

namespace rac::eval {
namespace {

std::optional<Label> LabelFromChar(char c) {
  if (c >= 'a' && c <= 'd') c = static_cast<char>(c - 'a' + 'A');
  if (c < 'A' || c > 'D') return std::nullopt;
  return label_at(static_cast<std::size_t>(c - 'A'));
}

// Lowercase "a" followed by whitespace and a letter reads as the article.
bool IsArticle(std::string_view s, std::size_t pos) {
  if (s[pos] != 'a') return false;
  std::size_t i = pos + 1;
  if (i >= s.size() || (s[i] != ' ' && s[i] != '\t')) return false;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]));
}

std::optional<Label> ByAnswerPhrase(const std::string& s) {
  static const std::regex kRe(
      R"(\banswer(?:\s+is)?\s*[:\-]?\s*(?:option\s+)?[\(\[\*"']*([abcd])(?![a-z0-9]))",
      std::regex::icase);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kRe);
       it != std::sregex_iterator(); ++it) {
    const auto pos = static_cast<std::size_t>((*it).position(1));
    if (IsArticle(s, pos)) continue;
    return LabelFromChar(s[pos]);
  }
  return std::nullopt;
}

std::optional<Label> ByLoneLine(std::string_view s) {
  static const std::regex kRe(R"(^[\(\[\*]*([abcd])[\)\]\*]*[.:)]?$)", std::regex::icase);
  for (std::string_view line : text::split_lines(s)) {
    const std::string t(text::trim(line));
    std::smatch m;
    if (std::regex_match(t, m, kRe)) return LabelFromChar(m[1].str()[0]);
  }
  return std::nullopt;
}

std::optional<Label> ByEarlyToken(std::string_view s) {
  static constexpr std::string_view kPunct = "()[]*.,:;!?\"'";
  std::size_t i = 0, seen = 0;
  while (i < s.size() && seen < 10) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    std::string_view tok = s.substr(i, j - i);
    ++seen;
    i = j;
    const bool decorated = tok.size() > 1;
    std::size_t b = 0, e = tok.size();
    while (b < e && kPunct.find(tok[b]) != std::string_view::npos) ++b;
    while (e > b && kPunct.find(tok[e - 1]) != std::string_view::npos) --e;
    if (e - b != 1) continue;
    const char c = tok[b];
    if (c == 'a' && !decorated) continue;  // article
    if (auto l = LabelFromChar(c)) return l;
  }
  return std::nullopt;
}

}  // namespace

ProblemSet compose_comprehensive(const ProblemSet& easy, const ProblemSet& hard,
                                 std::uint64_t seed, std::string name) {
  if (easy.pairs.empty() || hard.pairs.empty()) {
    throw ValidationError("", "both parent sets must be non-empty");
  }
  std::unordered_set<std::string> hard_ids;
  for (const auto& p : hard.pairs) hard_ids.insert(p.id);
  std::vector<std::string> shared;
  for (const auto& p : easy.pairs) {
    if (hard_ids.contains(p.id)) shared.push_back(p.id);
  }
  if (!shared.empty()) {
    std::string ids;
    for (const auto& id : shared) ids += (ids.empty() ? "" : ", ") + id;
    throw ValidationError("pairs", "ids present in both parents: " + ids);
  }

  const std::size_t k = std::min(easy.pairs.size(), hard.pairs.size());
  auto picked = sample_indices(easy.pairs.size(), k, seed);
  std::sort(picked.begin(), picked.end());

  ProblemSet out;
  out.name = std::move(name);
  out.tier = Tier::kComprehensive;
  out.pairs.reserve(k + hard.pairs.size());
  for (std::size_t i : picked) out.pairs.push_back(easy.pairs[i]);
  out.pairs.insert(out.pairs.end(), hard.pairs.begin(), hard.pairs.end());
  out.created_from.parents = {easy.name, hard.name};
  out.created_from.seed = seed;
  out.created_from.sample_sizes = {k, hard.pairs.size()};
  out.created_from.note = "seeded down-sample of " + easy.name + " merged with all of " +
                          hard.name;
  check_problem_set(out);
  return out;
}

std::string format_eval_prompt(const McqPair& pair) {
  return curation::render_question(pair);
}

std::optional<Label> extract_answer(std::string_view output) {
  const std::string s(output);
  if (auto l = ByAnswerPhrase(s)) return l;
  if (auto l = ByLoneLine(s)) return l;
  return ByEarlyToken(s);
}

std::string OracleAnswerer::answer(const McqPair& pair, const std::string&) {
  return "Answer: " + to_string(pair.correct_label);
}

std::string ConstantAnswerer::answer(const McqPair&, const std::string&) {
  return "Answer: " + to_string(label_);
}

std::string RandomAnswerer::answer(const McqPair&, const std::string& prompt) {
  SeededRng rng(fnv1a64(prompt, fnv1a64(std::to_string(seed_))));
  return "Answer: " + to_string(label_at(rng.below(4)));
}

ProviderAnswerer::ProviderAnswerer(ChatProvider& provider, std::string model,
                                   double temperature, int max_retries,
                                   RetryPolicy policy, Sleeper sleep)
    : provider_(provider),
      model_(std::move(model)),
      temperature_(temperature),
      max_retries_(max_retries),
      policy_(policy),
      sleep_(std::move(sleep)) {}

std::string ProviderAnswerer::answer(const McqPair&, const std::string& prompt) {
  ChatRequest req;
  req.model = model_;
  req.prompt = prompt;
  req.temperature = temperature_;
  return complete_with_retry(provider_, req, policy_, max_retries_, sleep_);
}

std::unique_ptr<Answerer> make_builtin_answerer(std::string_view spec,
                                                std::uint64_t seed) {
  if (spec == "oracle") return std::make_unique<OracleAnswerer>();
  if (spec == "random") return std::make_unique<RandomAnswerer>(seed);
  if (spec.starts_with("constant:")) {
    if (auto l = parse_label(spec.substr(9))) return std::make_unique<ConstantAnswerer>(*l);
  }
  throw ConfigError("unknown answerer \"" + std::string(spec) +
                    "\"; expected oracle, random, constant:A..D or --endpoint");
}

json to_json(const EvalItemRecord& r) {
  return {{"id", r.id},
          {"prompt", r.prompt},
          {"raw_output", r.raw_output},
          {"extracted", r.extracted ? json(to_string(*r.extracted)) : json(nullptr)},
          {"expected", to_string(r.expected)},
          {"correct", r.correct},
          {"latency_ms", r.latency_ms},
          {"error", r.error ? json(*r.error) : json(nullptr)}};
}

json to_json(const EvalReport& r) {
  auto tally = [](const Tally& t) {
    return json{{"total", t.total}, {"correct", t.correct}, {"accuracy", t.accuracy()}};
  };
  json pos = json::object();
  for (Label l : kLabels) pos[to_string(l)] = tally(r.per_position[index_of(l)]);
  json sub = json::object();
  for (const auto& [name, t] : r.per_subdomain) sub[name] = tally(t);
  return {{"set", r.set},
          {"total", r.total},
          {"answered", r.answered},
          {"unparsed", r.unparsed},
          {"correct", r.correct},
          {"accuracy", r.accuracy},
          {"per_position", pos},
          {"per_subdomain", sub},
          {"bias", curation::to_json(r.bias)},
          {"config", r.config}};
}

EvalRun run_eval(const ProblemSet& set, Answerer& answerer, const EvalConfig& cfg) {
  if (set.pairs.empty()) throw ValidationError("", "problem set " + set.name + " is empty");
  if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");
  const std::size_t n = set.pairs.size();
  EvalRun run;
  run.items.resize(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const McqPair& p = set.pairs[i];
      EvalItemRecord& rec = run.items[i];
      rec.id = p.id;
      rec.expected = p.correct_label;
      rec.prompt = format_eval_prompt(p);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        rec.raw_output = answerer.answer(p, rec.prompt);
        rec.extracted = extract_answer(rec.raw_output);
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      rec.latency_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0).count();
      rec.correct = rec.extracted && *rec.extracted == p.correct_label;
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.parallelism), n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  EvalReport& r = run.report;
  r.set = set.name;
  r.total = n;
  for (std::size_t i = 0; i < n; ++i) {
    const McqPair& p = set.pairs[i];
    const EvalItemRecord& rec = run.items[i];
    if (rec.extracted) ++r.answered;
    if (rec.correct) ++r.correct;
    auto& pos = r.per_position[index_of(p.correct_label)];
    ++pos.total;
    pos.correct += rec.correct ? 1 : 0;
    auto& sub = r.per_subdomain[p.subdomain.value_or(std::string(curation::kUncategorized))];
    ++sub.total;
    sub.correct += rec.correct ? 1 : 0;
  }
  r.unparsed = r.total - r.answered;
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
  r.bias = curation::position_bias(set.pairs);
  r.config = {{"answerer", answerer.name()},
              {"model", answerer.model()},
              {"seed", cfg.seed},
              {"tier", to_string(set.tier)}};
  return run;
}

}  // namespace rac::eval
