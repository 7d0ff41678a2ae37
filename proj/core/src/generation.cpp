#include "rac/generation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "rac/error.hpp"
#include "rac/random.hpp"
#include "rac/text.hpp"

namespace rac::gen {
namespace {

std::string NowIso8601() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()) % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3)
     << std::setfill('0') << ms.count() << 'Z';
  return ss.str();
}

std::string Hex16(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

std::string Located(std::size_t question, std::size_t line) {
  return " (question " + std::to_string(question) + ", response line " +
         std::to_string(line) + ")";
}

}  // namespace

void GenerationConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(temperature >= 0.0 && temperature <= 2.0)) fail("temperature must be in [0, 2]");
  if (!(top_p > 0.0 && top_p <= 1.0)) fail("top_p must be in (0, 1]");
  if (!(frequency_penalty >= -2.0 && frequency_penalty <= 2.0)) {
    fail("frequency_penalty must be in [-2, 2]");
  }
  if (!(presence_penalty >= -2.0 && presence_penalty <= 2.0)) {
    fail("presence_penalty must be in [-2, 2]");
  }
  if (questions_per_segment < 1) fail("questions_per_segment must be >= 1");
  if (max_retries < 0 || max_retries > 10) fail("max_retries must be in [0, 10]");
  if (parallelism < 1) fail("parallelism must be >= 1");
  if (model.empty()) fail("model must not be empty");
}

ChatRequest GenerationConfig::request(std::string prompt) const {
  ChatRequest r;
  r.model = model;
  r.prompt = std::move(prompt);
  r.temperature = temperature;
  r.top_p = top_p;
  r.frequency_penalty = frequency_penalty;
  r.presence_penalty = presence_penalty;
  return r;
}

std::vector<McqPair> parse_generation(std::string_view response,
                                      std::size_t expected_count) {
  const auto lines = text::split_lines(response);
  std::optional<std::size_t> open;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view t = text::trim(lines[i]);
    if (!open) {
      if (t == "```jsonl") open = i;
      else if (t.starts_with("```")) {
        throw ValidationError("", "unexpected fence \"" + std::string(t) +
                                      "\" at response line " + std::to_string(i + 1) +
                                      "; expected ```jsonl");
      }
    } else if (t == "```") {
      blocks.emplace_back(*open, i);
      open.reset();
    }
  }
  if (open) {
    throw ValidationError("", "unterminated ```jsonl block opened at response line " +
                                  std::to_string(*open + 1));
  }
  if (blocks.empty()) throw ValidationError("", "no ```jsonl block in response");
  if (blocks.size() > 1) {
    throw ValidationError("", "expected one ```jsonl block, found " +
                                  std::to_string(blocks.size()));
  }

  ParseOptions opts;
  opts.require_all_fields = false;
  opts.check_invariants = false;

  std::vector<McqPair> pairs;
  const auto [first, last] = blocks.front();
  for (std::size_t i = first + 1; i < last; ++i) {
    const std::string_view t = text::trim(lines[i]);
    if (t.empty()) continue;
    const std::size_t qn = pairs.size() + 1;
    const std::string where = Located(qn, i + 1);
    McqPair pair;
    try {
      pair = parse(t, opts);
    } catch (const ValidationError& e) {
      throw ValidationError(e.path(), e.message() + where);
    }
    if (!pair.rephrase) throw ValidationError("rephrase", "missing" + where);
    for (Label l : kLabels) {
      if (!pair.explanations.contains(l)) {
        throw ValidationError("explanations." + to_string(l), "missing" + where);
      }
    }
    auto issues = structural_issues(pair);
    if (!issues.empty()) {
      throw ValidationError(issues.front().path, issues.front().message + where);
    }
    pair.subdomain.reset();
    pair.source.reset();
    pair.id = compute_id(pair);
    pairs.push_back(std::move(pair));
  }
  if (pairs.size() != expected_count) {
    throw ValidationError("", "count mismatch: got " + std::to_string(pairs.size()) +
                                  ", expected " + std::to_string(expected_count));
  }
  return pairs;
}

std::string MockProvider::complete(const ChatRequest& request) {
  const std::string passage =
      extract_passage(request.prompt).value_or(std::string(request.prompt));
  const int count = requested_count(request.prompt).value_or(3);
  const std::uint64_t base = fnv1a64(passage, fnv1a64(std::to_string(seed_)));

  // Candidate keywords: distinct longer words in order of appearance.
  std::vector<std::string> keywords;
  for (auto& w : text::words(passage)) {
    if (w.size() < 5) continue;
    if (std::find(keywords.begin(), keywords.end(), w) == keywords.end()) {
      keywords.push_back(std::move(w));
    }
  }
  if (keywords.empty()) keywords = {"network", "protocol", "packet", "router"};

  // Sentences of the passage flattened to one line.
  std::vector<std::string> sentences;
  {
    std::string cur;
    for (char c : text::single_line(passage)) {
      cur.push_back(c);
      if (c == '.' || c == '!' || c == '?') {
        auto t = std::string(text::trim(cur));
        if (t.size() > 8) sentences.push_back(std::move(t));
        cur.clear();
      }
    }
    auto t = std::string(text::trim(cur));
    if (t.size() > 8) sentences.push_back(std::move(t));
  }
  if (sentences.empty()) sentences.push_back(text::single_line(text::trim(passage)));

  auto clip = [](const std::string& s) {
    return s.substr(0, text::prefix_bytes(s, 140));
  };

  std::string out = "Here are the questions.\n```jsonl\n";
  for (int k = 0; k < count; ++k) {
    const std::uint64_t h = base ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k + 1));
    SeededRng rng(h);
    const std::string& kw = keywords[rng.below(keywords.size())];
    const std::string& other1 = keywords[rng.below(keywords.size())];
    const std::string& other2 = keywords[rng.below(keywords.size())];
    const std::string fact = clip(sentences[rng.below(sentences.size())]);
    const auto answer = label_at(rng.below(4));

    std::array<std::string, 4> distractors = {
        "\"" + kw + "\" is unrelated to " + other1 + " in every network design",
        "\"" + kw + "\" only matters when " + other2 + " is disabled",
        "\"" + kw + "\" was removed from modern protocol stacks",
        ""};
    json choices = json::object();
    json explanations = json::object();
    std::size_t d = 0;
    for (Label l : kLabels) {
      if (l == answer) {
        choices[to_string(l)] = fact;
        explanations[to_string(l)] =
            "Correct: the passage states this directly, which is what the "
            "question asks about \"" + kw + "\".";
      } else {
        choices[to_string(l)] = distractors[d++];
        explanations[to_string(l)] =
            "Incorrect: unlike the sentence taken from the passage, this claim has "
            "no support there and contradicts what it says about \"" + kw + "\".";
      }
    }
    json rec = {
        {"question", "Which statement about \"" + kw +
                         "\" is supported by the passage? [ref " + Hex16(h).substr(0, 8) + "]"},
        {"choices", choices},
        {"answer", to_string(answer)},
        {"rephrase", "The question asks which of the four statements agrees with "
                     "what the passage says about \"" + kw + "\"."},
        {"explanations", explanations}};
    out += rec.dump(-1, ' ', false, json::error_handler_t::replace);
    out += '\n';
  }
  out += "```\n";
  return out;
}

json to_json(const GenerationBatchRecord& r) {
  return {{"batch_id", r.batch_id},
          {"segment_index", r.segment_index},
          {"book_id", r.book_id},
          {"section_path", r.section_path},
          {"raw_response", r.raw_response},
          {"ok", r.ok},
          {"error", r.ok ? json(nullptr) : json(r.error)},
          {"pair_count", r.pair_count},
          {"attempts", r.attempts},
          {"started_at", r.started_at},
          {"finished_at", r.finished_at}};
}

std::size_t GenerationResult::failures() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.ok ? 0 : 1;
  return n;
}

std::string batch_id_for(const ingest::CorpusSegment& segment, std::size_t index) {
  std::uint64_t h = fnv1a64(segment.book_id);
  for (const auto& s : segment.section_path) h = fnv1a64(s, h ^ 0x1f);
  h = fnv1a64(std::to_string(index), h);
  h = fnv1a64(segment.text, h);
  return "b" + Hex16(h);
}

GenerationResult generate_pairs(const std::vector<ingest::CorpusSegment>& segments,
                                const GenerationConfig& cfg, ChatProvider& provider,
                                const Sleeper& sleep) {
  cfg.validate();
  const std::size_t n = segments.size();
  std::vector<std::vector<McqPair>> per_segment(n);
  GenerationResult result;
  std::mutex records_mu;
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const auto& seg = segments[i];
      GenerationBatchRecord rec;
      rec.batch_id = batch_id_for(seg, i);
      rec.segment_index = i;
      rec.book_id = seg.book_id;
      rec.section_path = seg.section_path;
      rec.started_at = NowIso8601();

      const std::string prompt = build_prompt(seg, cfg);
      std::string current = prompt;
      const std::uint64_t jitter_seed = fnv1a64(rec.batch_id);
      for (int attempt = 1; attempt <= cfg.max_retries + 1; ++attempt) {
        rec.attempts = attempt;
        try {
          rec.raw_response = provider.complete(cfg.request(current));
        } catch (const ProviderError& e) {
          rec.error = e.what();
          if (!e.retryable()) break;
          if (attempt <= cfg.max_retries) sleep(cfg.backoff.delay(attempt - 1, jitter_seed));
          continue;
        } catch (const std::exception& e) {
          rec.error = e.what();
          break;
        }
        try {
          auto pairs = parse_generation(
              rec.raw_response, static_cast<std::size_t>(cfg.questions_per_segment));
          for (auto& p : pairs) p.source = Source{seg.book_id, seg.section_path, rec.batch_id};
          rec.pair_count = pairs.size();
          rec.ok = true;
          rec.error.clear();
          per_segment[i] = std::move(pairs);
          break;
        } catch (const ValidationError& e) {
          rec.error = e.what();
          current = build_retry_prompt(prompt, rec.error);
        }
      }
      rec.finished_at = NowIso8601();
      std::lock_guard lock(records_mu);
      result.records.push_back(std::move(rec));
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.parallelism), n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const auto& a, const auto& b) { return a.segment_index < b.segment_index; });
  for (auto& ps : per_segment) {
    for (auto& p : ps) result.pairs.push_back(std::move(p));
  }
  return result;
}

}  // namespace rac::gen
