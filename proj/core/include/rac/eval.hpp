#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rac/curation.hpp"
#include "rac/model.hpp"
#include "rac/provider.hpp"
#include "rac/random.hpp"

namespace rac::eval {

// Down-samples `easy` to min(|easy|, |hard|) with the seed and appends all of
// `hard`. Throws ValidationError listing ids shared by both parents.
ProblemSet compose_comprehensive(const ProblemSet& easy, const ProblemSet& hard,
                                 std::uint64_t seed,
                                 std::string name = "comprehensive");

// Question, options "A. ".."D. " one per line, and the answer instruction.
// Rephrase and explanations are never included.
std::string format_eval_prompt(const McqPair& pair);

// First match wins, case-insensitive:
//   1. "Answer: X" / "answer is X"
//   2. a line holding only a label, optionally decorated: "B", "B.", "(B)"
//   3. the first standalone label token among the first 10 tokens
// A lowercase "a" followed by a word is read as the article, not a label.
std::optional<Label> extract_answer(std::string_view output);

// Produces raw model output for one question. Must be thread-safe.
class Answerer {
 public:
  virtual ~Answerer() = default;
  virtual std::string answer(const McqPair& pair, const std::string& prompt) = 0;
  virtual std::string name() const = 0;
  virtual std::string model() const { return name(); }
};

// Reads the correct label.
class OracleAnswerer final : public Answerer {
 public:
  std::string answer(const McqPair& pair, const std::string& prompt) override;
  std::string name() const override { return "oracle"; }
};

class ConstantAnswerer final : public Answerer {
 public:
  explicit ConstantAnswerer(Label label) : label_(label) {}
  std::string answer(const McqPair& pair, const std::string& prompt) override;
  std::string name() const override { return "constant:" + to_string(label_); }

 private:
  Label label_;
};

// Uniform label drawn from (seed, prompt); order-independent.
class RandomAnswerer final : public Answerer {
 public:
  explicit RandomAnswerer(std::uint64_t seed) : seed_(seed) {}
  std::string answer(const McqPair& pair, const std::string& prompt) override;
  std::string name() const override { return "random"; }

 private:
  std::uint64_t seed_;
};

// Sends the prompt to a chat-completions endpoint.
class ProviderAnswerer final : public Answerer {
 public:
  ProviderAnswerer(ChatProvider& provider, std::string model,
                   double temperature = 0.0, int max_retries = 3,
                   RetryPolicy policy = {}, Sleeper sleep = real_sleeper());
  std::string answer(const McqPair& pair, const std::string& prompt) override;
  std::string name() const override { return provider_.name(); }
  std::string model() const override { return model_; }

 private:
  ChatProvider& provider_;
  std::string model_;
  double temperature_;
  int max_retries_;
  RetryPolicy policy_;
  Sleeper sleep_;
};

// "oracle", "random", "constant:X". Throws ConfigError otherwise.
std::unique_ptr<Answerer> make_builtin_answerer(std::string_view spec,
                                                std::uint64_t seed);

struct EvalConfig {
  std::uint64_t seed = kDefaultSeed;
  int parallelism = 4;
};

struct EvalItemRecord {
  std::string id;
  std::string prompt;
  std::string raw_output;
  std::optional<Label> extracted;
  Label expected = Label::A;
  bool correct = false;
  double latency_ms = 0.0;
  std::optional<std::string> error;
};

json to_json(const EvalItemRecord& r);

struct Tally {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
};

struct EvalReport {
  std::string set;
  std::size_t total = 0;
  std::size_t answered = 0;
  std::size_t unparsed = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  std::array<Tally, 4> per_position{};       // keyed by the correct label
  std::map<std::string, Tally> per_subdomain;  // missing subdomain -> "uncategorized"
  curation::BiasReport bias;
  json config;
};

json to_json(const EvalReport& r);

struct EvalRun {
  EvalReport report;
  std::vector<EvalItemRecord> items;  // set order
};

// One query per pair, up to cfg.parallelism in flight. Unparsed outputs and
// answerer failures count as incorrect. Throws ValidationError for an empty
// set.
EvalRun run_eval(const ProblemSet& set, Answerer& answerer, const EvalConfig& cfg);

}  // namespace rac::eval
