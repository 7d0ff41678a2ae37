#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "rac/curation.hpp"
#include "rac/error.hpp"
#include "rac/eval.hpp"
#include "rac/io.hpp"
#include "rac/text.hpp"

using namespace rac;
using namespace rac::eval;
using rac::testing::synthetic_pairs;

namespace {

ProblemSet Set(std::string name, Tier tier, std::vector<McqPair> pairs) {
  return ProblemSet{std::move(name), tier, std::move(pairs), {}};
}

// Pairs whose ids cannot collide with synthetic_pairs(n, seed).
std::vector<McqPair> HardPairs(std::size_t n) {
  auto pairs = synthetic_pairs(n, 99);
  for (auto& p : pairs) {
    p.question = "Hard " + p.question;
    p = with_id(p);
  }
  return pairs;
}

class FailingAnswerer final : public Answerer {
 public:
  std::string answer(const McqPair&, const std::string&) override {
    throw ProviderError("endpoint unreachable", true);
  }
  std::string name() const override { return "failing"; }
};

}  // namespace

TEST_CASE("extraction matches the hand-labelled phrasing corpus") {
  const json corpus = io::read_json(testing::data_path("extraction_phrasings.json"));
  REQUIRE(corpus.size() == 30);
  for (const auto& item : corpus) {
    const std::string output = item["output"];
    const auto got = extract_answer(output);
    std::optional<Label> want;
    if (!item["expected"].is_null()) want = parse_label(item["expected"].get<std::string>());
    INFO(output);
    CHECK(got == want);
  }
}

TEST_CASE("extraction rules") {
  CHECK(extract_answer("The answer is B.") == Label::B);
  CHECK(extract_answer("(C) because error detection happens per frame") == Label::C);
  CHECK_FALSE(extract_answer("All of these seem plausible."));
  CHECK_FALSE(extract_answer(""));
  // The rule-1 match beats an earlier standalone label.
  CHECK(extract_answer("B looks tempting, but the answer is D") == Label::D);
  // A label past the tenth token is not picked up by rule 3.
  CHECK_FALSE(extract_answer("one two three four five six seven eight nine ten C"));
  CHECK(extract_answer("one two three four five six seven eight nine C") == Label::C);
  // Lowercase article.
  CHECK_FALSE(extract_answer("This is a hard question."));
  CHECK(extract_answer("a") == Label::A);  // a line holding only a label
  CHECK(extract_answer("a.") == Label::A);
}

TEST_CASE("format_eval_prompt") {
  const McqPair p = testing::osi_pair();
  const std::string prompt = format_eval_prompt(p);
  int option_lines = 0;
  for (auto line : text::split_lines(prompt)) {
    for (Label l : kLabels) {
      if (line.rfind(std::string(1, to_char(l)) + ". ", 0) == 0) ++option_lines;
    }
  }
  CHECK(option_lines == 4);
  CHECK(prompt.find(p.explanations.at(Label::B)) == std::string::npos);
}

TEST_CASE("compose_comprehensive") {
  const auto easy = Set("easy", Tier::kEasy, synthetic_pairs(756, 1));
  const auto hard = Set("hard", Tier::kHard, HardPairs(327));
  const auto a = compose_comprehensive(easy, hard, 42);
  const auto b = compose_comprehensive(easy, hard, 42);
  CHECK(a.pairs.size() == 654);
  CHECK(a.pairs == b.pairs);
  CHECK(a.tier == Tier::kComprehensive);
  CHECK(a.created_from.parents == std::vector<std::string>{"easy", "hard"});
  CHECK(a.created_from.seed == 42u);
  CHECK(a.created_from.sample_sizes == std::vector<std::size_t>{327, 327});
  std::set<std::string> easy_ids;
  for (const auto& p : easy.pairs) easy_ids.insert(p.id);
  std::size_t from_easy = 0;
  for (const auto& p : a.pairs) from_easy += easy_ids.count(p.id);
  CHECK(from_easy == 327);
  CHECK(compose_comprehensive(easy, hard, 43).pairs != a.pairs);

  // Easy smaller than hard: all of easy plus all of hard.
  const auto small = Set("small", Tier::kEasy, synthetic_pairs(100, 2));
  CHECK(compose_comprehensive(small, hard, 1).pairs.size() == 427);

  auto overlap = hard;
  overlap.pairs.push_back(easy.pairs[0]);
  try {
    compose_comprehensive(easy, overlap, 1);
    FAIL("accepted shared ids");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(easy.pairs[0].id) != std::string::npos);
  }
}

TEST_CASE("run_eval with built-in answerers") {
  const auto balanced = curation::choiceboost_all(synthetic_pairs(50, 3));
  const auto set = Set("aug", Tier::kEasy, balanced);

  OracleAnswerer oracle;
  auto r = run_eval(set, oracle, {}).report;
  CHECK(r.accuracy == 1.0);
  CHECK(r.total == 200);
  CHECK(r.answered == 200);

  ConstantAnswerer constant(Label::A);
  r = run_eval(set, constant, {}).report;
  CHECK(r.correct == 50);
  CHECK(r.accuracy == 0.25);
  CHECK(r.per_position[0].accuracy() == 1.0);
  CHECK(r.per_position[1].accuracy() == 0.0);
  CHECK(r.bias.tv_distance == 0.0);

  RandomAnswerer random(7);
  EvalConfig serial{7, 1}, wide{7, 8};
  const auto s = run_eval(set, random, serial);
  const auto w = run_eval(set, random, wide);
  CHECK(s.report.correct == w.report.correct);
  for (std::size_t i = 0; i < s.items.size(); ++i) CHECK(s.items[i].raw_output == w.items[i].raw_output);

  const json j = to_json(s.report);
  for (auto key : {"set", "total", "answered", "unparsed", "correct", "accuracy", "per_position",
                   "per_subdomain", "bias", "config"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["config"]["answerer"] == "random");
  CHECK(j["config"]["seed"] == 7);

  CHECK_THROWS_AS(run_eval(Set("empty", Tier::kEasy, {}), oracle, {}), ValidationError);
}

TEST_CASE("random answerer accuracy sits near a quarter") {
  const auto set = Set("comp", Tier::kComprehensive, synthetic_pairs(654, 4));
  RandomAnswerer random(42);
  const auto r = run_eval(set, random, {}).report;
  CHECK(r.accuracy >= 0.20);
  CHECK(r.accuracy <= 0.30);
}

TEST_CASE("answerer failures are unparsed, not fatal") {
  FailingAnswerer failing;
  const auto run = run_eval(Set("s", Tier::kEasy, synthetic_pairs(5, 5)), failing, {});
  CHECK(run.report.unparsed == 5);
  CHECK(run.report.correct == 0);
  for (const auto& item : run.items) {
    REQUIRE(item.error);
    CHECK(item.error->find("unreachable") != std::string::npos);
  }
}

TEST_CASE("per-subdomain tallies") {
  auto pairs = synthetic_pairs(4, 6);
  pairs[0].subdomain = "Transport layer";
  pairs[1].subdomain = "Transport layer";
  OracleAnswerer oracle;
  const auto r = run_eval(Set("s", Tier::kEasy, pairs), oracle, {}).report;
  CHECK(r.per_subdomain.at("Transport layer").total == 2);
  CHECK(r.per_subdomain.at("uncategorized").total == 2);
}

TEST_CASE("builtin answerer specs") {
  CHECK(make_builtin_answerer("oracle", 1)->name() == "oracle");
  CHECK(make_builtin_answerer("constant:C", 1)->name() == "constant:C");
  CHECK(make_builtin_answerer("random", 1)->name() == "random");
  CHECK_THROWS_AS(make_builtin_answerer("constant:E", 1), ConfigError);
  CHECK_THROWS_AS(make_builtin_answerer("gpt", 1), ConfigError);
}
