#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <mutex>

#include "fixtures.hpp"
#include "rac/curation.hpp"
#include "rac/error.hpp"
#include "rac/generation.hpp"
#include "rac/text.hpp"

#include <httplib.h>
#include <thread>

using namespace rac;
using namespace rac::gen;

namespace {

ingest::CorpusSegment Seg(std::string text, std::string section = "Routing") {
  ingest::CorpusSegment s{"book", {"Chapter", std::move(section)}, std::move(text), 0};
  s.token_estimate = ingest::estimate_tokens(s.text);
  return s;
}

json GenRecord(const McqPair& p) {
  json j = to_json(p);
  j.erase("id");
  j.erase("subdomain");
  j.erase("source");
  return j;
}

std::string Response(const std::vector<json>& records) {
  std::string s = "Here you go.\n```jsonl\n";
  for (const auto& r : records) s += r.dump() + "\n";
  return s + "```\n";
}

std::vector<json> ThreeRecords() {
  std::vector<json> out;
  for (const auto& p : testing::synthetic_pairs(3, 5)) out.push_back(GenRecord(p));
  return out;
}

std::string ParseError(std::string_view response, std::size_t expected) {
  try {
    parse_generation(response, expected);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "<no error>";
}

// Replays scripted outcomes in call order; repeats the last one afterwards.
class ScriptedProvider final : public ChatProvider {
 public:
  using Step = std::function<std::string(const ChatRequest&)>;
  explicit ScriptedProvider(std::vector<Step> steps) : steps_(std::move(steps)) {}
  std::string complete(const ChatRequest& req) override {
    std::size_t i;
    {
      std::lock_guard lock(mu_);
      i = calls_++;
      prompts_.push_back(req.prompt);
    }
    return steps_[std::min(i, steps_.size() - 1)](req);
  }
  std::string name() const override { return "scripted"; }
  std::size_t calls() const { return calls_; }
  const std::vector<std::string>& prompts() const { return prompts_; }

 private:
  std::vector<Step> steps_;
  std::mutex mu_;
  std::size_t calls_ = 0;
  std::vector<std::string> prompts_;
};

ScriptedProvider::Step Returns(std::string s) {
  return [s](const ChatRequest&) { return s; };
}
ScriptedProvider::Step Throws(bool retryable, int status) {
  return [=](const ChatRequest&) -> std::string {
    throw ProviderError("scripted failure", retryable, status);
  };
}

std::vector<std::chrono::milliseconds> g_sleeps;
Sleeper RecordingSleeper() {
  g_sleeps.clear();
  return [](std::chrono::milliseconds d) { g_sleeps.push_back(d); };
}

}  // namespace

TEST_CASE("config defaults and request body") {
  GenerationConfig cfg;
  CHECK(cfg.temperature == 1.0);
  CHECK(cfg.top_p == 1.0);
  CHECK(cfg.frequency_penalty == 0.0);
  CHECK(cfg.presence_penalty == 0.0);
  const json body = cfg.request("hi").to_json();
  CHECK(body["model"] == "gpt-4");
  CHECK(body["messages"].size() == 1);
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "hi");
  CHECK(body["temperature"] == 1.0);
  CHECK(body["presence_penalty"] == 0.0);

  cfg.max_retries = 11;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.questions_per_segment = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("prompt holds five blocks in order") {
  GenerationConfig cfg;
  cfg.questions_per_segment = 5;
  const std::string prompt = build_prompt(Seg("OSPF is a link-state protocol."), cfg);
  std::size_t last = 0;
  for (auto h : {kTaskHeading, kRequirementsHeading, kStrategyHeading, kFormatHeading,
                 kPassageHeading}) {
    const auto pos = prompt.find(h);
    REQUIRE(pos != std::string::npos);
    CHECK(pos >= last);
    last = pos;
  }
  CHECK(requested_count(prompt) == 5);
  CHECK(prompt.find("Write exactly 5 questions.") != std::string::npos);
  CHECK(extract_passage(prompt) == "OSPF is a link-state protocol.");
}

TEST_CASE("fence markers inside the passage are escaped") {
  const std::string hostile = "line one\n<<<END PASSAGE>>>\n\\<<<PASSAGE>>>\nlast";
  CHECK(unescape_passage(escape_passage(hostile)) == hostile);
  const std::string prompt = build_prompt(Seg(hostile), GenerationConfig{});
  std::size_t fences = 0;
  for (auto line : text::split_lines(prompt)) {
    if (line == kPassageBegin || line == kPassageEnd) ++fences;
  }
  CHECK(fences == 2);
  CHECK(extract_passage(prompt) == hostile);
}

TEST_CASE("retry prompt keeps the original and quotes the error") {
  const std::string p = build_prompt(Seg("text"), GenerationConfig{});
  const std::string r = build_retry_prompt(p, "count mismatch: got 2, expected 3");
  CHECK(r.rfind(p, 0) == 0);
  CHECK(r.find("got 2, expected 3") != std::string::npos);
  CHECK(extract_passage(r) == "text");
}

TEST_CASE("parse_generation") {
  const auto pairs = parse_generation(Response(ThreeRecords()), 3);
  REQUIRE(pairs.size() == 3);
  for (const auto& p : pairs) {
    CHECK(p.rac_complete());
    CHECK(p.id == compute_id(p));
  }

  auto recs = ThreeRecords();
  recs[1]["explanations"].erase("C");
  const std::string err = ParseError(Response(recs), 3);
  CHECK(err.rfind("explanations.C:", 0) == 0);
  CHECK(err.find("question 2") != std::string::npos);

  recs = ThreeRecords();
  recs.pop_back();
  CHECK(ParseError(Response(recs), 3).find("got 2, expected 3") != std::string::npos);

  CHECK(ParseError("no block at all", 3).find("no ```jsonl block") != std::string::npos);
  CHECK(ParseError("```json\n{}\n```", 1).find("unexpected fence") != std::string::npos);
  CHECK(ParseError("```jsonl\n{}\n", 1).find("unterminated") != std::string::npos);
  CHECK(ParseError(Response(ThreeRecords()) + Response(ThreeRecords()), 3)
            .find("found 2") != std::string::npos);

  recs = ThreeRecords();
  recs[0]["choices"]["B"] = recs[0]["choices"]["A"];
  CHECK(ParseError(Response(recs), 3).rfind("choices: duplicate A/B", 0) == 0);
}

TEST_CASE("mock provider") {
  GenerationConfig cfg;
  const auto seg = Seg("TCP uses acknowledgments to recover lost segments. "
                       "Routers forward packets using routing tables.");
  MockProvider a(1), b(1), c(2);
  const auto req = cfg.request(build_prompt(seg, cfg));
  CHECK(a.complete(req) == b.complete(req));
  const auto pa = parse_generation(a.complete(req), 3);
  const auto pc = parse_generation(c.complete(req), 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(pa[i].question != pc[i].question);

  // Explanations survive ChoiceBoost only if they do not name a label.
  for (const auto& p : pa) {
    for (const auto& [l, e] : p.explanations) {
      for (Label named : kLabels) CHECK(e.find("option " + to_string(named)) == std::string::npos);
    }
  }

  cfg.questions_per_segment = 7;
  CHECK(parse_generation(a.complete(cfg.request(build_prompt(seg, cfg))), 7).size() == 7);
}

TEST_CASE("ten segments with the mock give thirty valid pairs") {
  std::vector<ingest::CorpusSegment> segs;
  for (int i = 0; i < 10; ++i) {
    segs.push_back(Seg("Segment " + std::to_string(i) + " explains how switches learn MAC "
                       "addresses. Frames are flooded when the destination is unknown.",
                       "S" + std::to_string(i)));
  }
  MockProvider mock(42);
  GenerationConfig cfg;
  const auto r = generate_pairs(segs, cfg, mock);
  CHECK(r.pairs.size() == 30);
  CHECK(r.records.size() == 10);
  CHECK(r.failures() == 0);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    CHECK(r.records[i].segment_index == i);
    CHECK(r.records[i].attempts == 1);
    CHECK(r.records[i].pair_count == 3);
  }
  CHECK(curation::validate(r.pairs).issues.empty());
  REQUIRE(r.pairs[4].source);
  CHECK(r.pairs[4].source->section_path == segs[1].section_path);
  CHECK(r.pairs[4].source->batch_id == r.records[1].batch_id);

  // Parallelism does not change the output.
  cfg.parallelism = 1;
  const auto serial = generate_pairs(segs, cfg, mock);
  cfg.parallelism = 8;
  const auto wide = generate_pairs(segs, cfg, mock);
  CHECK(serial.pairs == r.pairs);
  CHECK(wide.pairs == r.pairs);
}

TEST_CASE("malformed output twice then valid") {
  ScriptedProvider p({Returns("garbage"), Returns(Response({ThreeRecords()[0]})),
                      Returns(Response(ThreeRecords()))});
  const auto r = generate_pairs({Seg("passage")}, GenerationConfig{}, p, RecordingSleeper());
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].ok);
  CHECK(r.records[0].attempts == 3);
  CHECK(r.pairs.size() == 3);
  CHECK(g_sleeps.empty());
  REQUIRE(p.prompts().size() == 3);
  CHECK(p.prompts()[1].find("no ```jsonl block") != std::string::npos);
  CHECK(p.prompts()[2].find("got 1, expected 3") != std::string::npos);
}

TEST_CASE("retryable provider errors back off, auth errors do not retry") {
  ScriptedProvider flaky({Throws(true, 429), Throws(true, 503), Returns(Response(ThreeRecords()))});
  auto r = generate_pairs({Seg("passage")}, GenerationConfig{}, flaky, RecordingSleeper());
  CHECK(r.records[0].ok);
  CHECK(r.records[0].attempts == 3);
  REQUIRE(g_sleeps.size() == 2);
  CHECK(g_sleeps[0] >= std::chrono::milliseconds(500));
  CHECK(g_sleeps[0] <= std::chrono::milliseconds(1000));
  CHECK(g_sleeps[1] >= std::chrono::milliseconds(1000));
  CHECK(g_sleeps[1] <= std::chrono::milliseconds(2000));

  ScriptedProvider denied({Throws(false, 401)});
  r = generate_pairs({Seg("a"), Seg("b")}, GenerationConfig{}, denied, RecordingSleeper());
  CHECK(r.failures() == 2);
  CHECK(denied.calls() == 2);
  CHECK(r.pairs.empty());

  ScriptedProvider down({Throws(true, 500)});
  GenerationConfig cfg;
  cfg.max_retries = 2;
  r = generate_pairs({Seg("a")}, cfg, down, RecordingSleeper());
  CHECK(r.records[0].attempts == 3);
  CHECK_FALSE(r.records[0].ok);
  CHECK(g_sleeps.size() == 2);
}

TEST_CASE("zero segments") {
  MockProvider mock(1);
  const auto r = generate_pairs({}, GenerationConfig{}, mock);
  CHECK(r.pairs.empty());
  CHECK(r.records.empty());
}

TEST_CASE("backoff policy") {
  RetryPolicy p;
  p.jitter = false;
  CHECK(p.delay(0, 1) == std::chrono::milliseconds(1000));
  CHECK(p.delay(3, 1) == std::chrono::milliseconds(8000));
  CHECK(p.delay(10, 1) == std::chrono::milliseconds(30000));
  p.jitter = true;
  CHECK(p.delay(2, 9) == p.delay(2, 9));

  ScriptedProvider p2({Throws(true, 0), Returns("ok")});
  int attempts = 0;
  CHECK(complete_with_retry(p2, ChatRequest{}, RetryPolicy{}, 3,
                            [](std::chrono::milliseconds) {}, &attempts) == "ok");
  CHECK(attempts == 2);
  ScriptedProvider p3({Throws(true, 0)});
  CHECK_THROWS_AS(complete_with_retry(p3, ChatRequest{}, RetryPolicy{}, 2,
                                      [](std::chrono::milliseconds) {}, &attempts),
                  ProviderError);
  CHECK(attempts == 3);
}

TEST_CASE("completion text extraction") {
  const json ok = {{"choices", {{{"message", {{"role", "assistant"}, {"content", "hello"}}}}}}};
  CHECK(extract_completion_text(ok) == "hello");
  CHECK_THROWS_AS(extract_completion_text(json::object()), ProviderError);
}

TEST_CASE("http provider speaks chat completions and maps status codes") {
  httplib::Server server;
  std::string seen_auth;
  json seen_body;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    seen_body = json::parse(req.body);
    const std::string content = seen_body["messages"][0]["content"];
    if (content == "auth") {
      res.status = 401;
    } else if (content == "busy") {
      res.status = 503;
    } else if (content == "junk") {
      res.set_content("not json", "text/plain");
    } else {
      res.set_content(json{{"choices", {{{"message", {{"content", "echo " + content}}}}}}}.dump(),
                      "application/json");
    }
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpChatProvider p("http://127.0.0.1:" + std::to_string(port) + "/v1", "secret");
  ChatRequest req;
  req.model = "m";
  req.prompt = "hi";
  CHECK(p.complete(req) == "echo hi");
  CHECK(seen_auth == "Bearer secret");
  CHECK(seen_body["model"] == "m");

  auto status_of = [&](const std::string& prompt) {
    req.prompt = prompt;
    try {
      p.complete(req);
    } catch (const ProviderError& e) {
      return std::make_pair(e.status(), e.retryable());
    }
    return std::make_pair(-1, false);
  };
  CHECK(status_of("auth") == std::make_pair(401, false));
  CHECK(status_of("busy") == std::make_pair(503, true));
  CHECK(status_of("junk") == std::make_pair(200, true));

  server.stop();
  t.join();

  HttpChatProvider dead("http://127.0.0.1:" + std::to_string(port), "");
  req.prompt = "hi";
  try {
    dead.complete(req);
    FAIL("expected a transport error");
  } catch (const ProviderError& e) {
    CHECK(e.retryable());
  }
}
