#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "rac/error.hpp"
#include "rac/model.hpp"

using namespace rac;
using rac::testing::osi_pair;

namespace {

std::string ErrorPath(const std::string& record) {
  try {
    parse(record);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "<no error>";
}

json Record(const McqPair& p) { return to_json(p); }

}  // namespace

TEST_CASE("labels") {
  CHECK(to_string(Label::C) == "C");
  CHECK(parse_label("D") == Label::D);
  CHECK_FALSE(parse_label("E"));
  CHECK_FALSE(parse_label("a"));
  CHECK_FALSE(parse_label(""));
}

TEST_CASE("content id matches golden digests computed with an independent hasher") {
  CHECK(osi_pair().id == "040ca41337baf9f84bf0a934bf9b08e1889fb8afc48d8889d520b869b05c70bd");

  McqPair fr;
  fr.question = "Quel protocole gère l’adressage \"logique\"?";
  fr.choices = {"IP", "Ethernet", "ARP", "PPP"};
  fr.correct_label = Label::A;
  CHECK(compute_id(fr) == "b8e2aa769b9020c0de12f9d64ad249699971fe8d2f10a42071479a1091ece65b");
}

TEST_CASE("id ignores annotation and field order") {
  McqPair p = osi_pair();
  McqPair bare = p;
  bare.rephrase.reset();
  bare.explanations.clear();
  bare.subdomain = "Network layer and Routing";
  CHECK(compute_id(bare) == p.id);

  json j = Record(p);
  json reordered = json::object();
  for (auto it = j.rbegin(); it != j.rend(); ++it) reordered[it.key()] = it.value();
  CHECK(from_json(reordered) == p);
}

TEST_CASE("id changes with the answer") {
  McqPair p = osi_pair();
  p.correct_label = Label::C;
  CHECK(compute_id(p) != osi_pair().id);
}

TEST_CASE("serialize is single-line with sorted keys and parses back") {
  const McqPair p = osi_pair();
  const std::string s = serialize(p);
  CHECK(s.find('\n') == std::string::npos);
  CHECK(s.rfind("{\"answer\":\"B\",\"choices\":", 0) == 0);
  CHECK(parse(s) == p);
}

TEST_CASE("randomized pairs round-trip") {
  SeededRng rng(7);
  for (std::size_t i = 0; i < 500; ++i) {
    const McqPair p = testing::random_pair(rng, i);
    const McqPair back = parse(serialize(p));
    REQUIRE(back == p);
    CHECK(serialize(back) == serialize(p));
  }
}

TEST_CASE("schema errors name the field") {
  json j = Record(osi_pair());
  j["choices"].erase("D");
  CHECK(ErrorPath(j.dump()) == "choices.D");

  j = Record(osi_pair());
  j["answer"] = "E";
  try {
    from_json(j);
    FAIL("accepted label E");
  } catch (const ValidationError& e) {
    CHECK(e.path() == "answer");
    CHECK(std::string(e.what()).find("A, B, C, D") != std::string::npos);
  }

  j = Record(osi_pair());
  j["extra"] = 1;
  CHECK(ErrorPath(j.dump()) == "extra");

  j = Record(osi_pair());
  j.erase("rephrase");
  CHECK(ErrorPath(j.dump()) == "rephrase");

  j = Record(osi_pair());
  j["id"] = std::string(64, '0');
  CHECK(ErrorPath(j.dump()) == "id");

  CHECK(ErrorPath("{not json") == "");
  CHECK(ErrorPath("[1,2]") == "");
}

TEST_CASE("structural invariants") {
  McqPair p = osi_pair();
  p.choices[2] = "  network   LAYER ";
  auto issues = structural_issues(p);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].path == "choices");
  CHECK(issues[0].message == "duplicate B/C");

  p = osi_pair();
  p.explanations.erase(Label::D);
  issues = structural_issues(p);
  REQUIRE_FALSE(issues.empty());
  CHECK(issues[0].path == "explanations");
  CHECK(issues[0].message == "incomplete");

  p = osi_pair();
  p.rephrase.reset();
  CHECK_FALSE(structural_issues(p).empty());

  p = osi_pair();
  p.question = "   ";
  CHECK(structural_issues(p).at(0).path == "question");
  CHECK_THROWS_AS(check_structure(p), ValidationError);

  p = osi_pair();
  p.rephrase.reset();
  p.explanations.clear();
  CHECK(structural_issues(p).empty());
  CHECK_FALSE(p.rac_complete());
}

TEST_CASE("problem sets and manifests") {
  ProblemSet set{"easy", Tier::kEasy, {osi_pair(), osi_pair()}, {}};
  CHECK(duplicate_ids(set.pairs) == std::vector<std::string>{osi_pair().id});
  CHECK_THROWS_AS(check_problem_set(set), ValidationError);

  ProblemSet comp{"comp", Tier::kComprehensive, {osi_pair()}, {}};
  CHECK_THROWS_AS(check_problem_set(comp), ValidationError);
  comp.created_from.parents = {"easy", "hard"};
  comp.created_from.seed = 1;
  CHECK_NOTHROW(check_problem_set(comp));

  CHECK(parse_tier("comprehensive") == Tier::kComprehensive);
  CHECK_THROWS(parse_tier("medium"));

  DatasetManifest m;
  m.raw = 10;
  m.validated = 9;
  m.test = 1;
  m.train_pre_augment = 8;
  m.train_augmented = 32;
  m.choiceboost_applied = true;
  m.split_fraction = 0.1;
  m.taxonomy = "networking-9";
  CHECK_NOTHROW(check_manifest(m));
  m.train_augmented = 31;
  CHECK_THROWS_AS(check_manifest(m), ValidationError);
  m.train_augmented = 32;
  m.validated = 11;
  CHECK_THROWS_AS(check_manifest(m), ValidationError);
}
