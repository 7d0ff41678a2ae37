#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "rac/curation.hpp"
#include "rac/error.hpp"
#include "rac/eval.hpp"
#include "rac/generation.hpp"
#include "rac/ingest.hpp"
#include "rac/io.hpp"
#include "rac/model.hpp"
#include "rac/random.hpp"
#include "rac/review.hpp"
#include "rac/review_server.hpp"
#include "rac/taxonomy.hpp"

namespace rac::cli {
namespace {

namespace fs = std::filesystem;

struct IngestArgs {
  std::string manifest;
  std::string out;
  std::size_t budget = ingest::kDefaultBudget;
};

struct ProviderArgs {
  std::string endpoint;
  bool mock = false;
  std::string model = "gpt-4";
};

struct GenerateArgs {
  std::string in;
  std::string out;
  std::string audit;
  ProviderArgs provider;
  std::uint64_t seed = kDefaultSeed;
  gen::GenerationConfig cfg;
};

struct InOutArgs {
  std::string in;
  std::string out;
};

struct ValidateArgs {
  std::string in;
  std::string out;    // issue report
  std::string valid;  // optional valid-pair dataset
};

struct SplitArgs {
  std::string in;
  std::string train;
  std::string test;
  double fraction = 0.05;
  std::uint64_t seed = kDefaultSeed;
};

struct ExportArgs {
  std::string in;
  std::string out;
  std::string style = "rac";
};

struct StatsArgs {
  std::string in;
  std::string out;
  std::string taxonomy;
  std::size_t top_k = curation::kDefaultTopK;
};

struct ComposeArgs {
  std::string easy;
  std::string hard;
  std::string out;
  std::string meta;
  std::string name = "comprehensive";
  std::uint64_t seed = kDefaultSeed;
};

struct EvalArgs {
  std::string set;
  std::string out;
  std::string items;
  std::string name;
  std::string tier = "easy";
  std::string answerer;
  ProviderArgs provider;
  double temperature = 0.0;
  int max_retries = 3;
  int parallelism = 4;
  std::uint64_t seed = kDefaultSeed;
};

struct ServeArgs {
  std::string store;
  std::string host = "127.0.0.1";
  int port = review::kDefaultPort;
  std::string ui_dir;
};

struct SampleArgs {
  std::string in;
  std::string store;
  std::string out;
  std::size_t size = review::kDefaultSampleSize;
  std::uint64_t seed = kDefaultSeed;
};

struct PipelineArgs {
  std::string manifest;
  std::string out_dir;
  std::string taxonomy;
  std::string style = "rac";
  std::size_t budget = ingest::kDefaultBudget;
  double fraction = 0.05;
  std::uint64_t seed = kDefaultSeed;
  ProviderArgs provider;
  gen::GenerationConfig cfg;
};

std::string Stem(const std::string& path) { return fs::path(path).stem().string(); }

std::unique_ptr<ChatProvider> MakeProvider(const ProviderArgs& a, std::uint64_t seed) {
  if (a.mock && !a.endpoint.empty()) throw ConfigError("use either --mock or --endpoint, not both");
  if (a.mock) return std::make_unique<gen::MockProvider>(seed);
  if (a.endpoint.empty()) throw ConfigError("a provider is required: --endpoint URL or --mock");
  return HttpChatProvider::from_env(a.endpoint);
}

curation::Taxonomy LoadTaxonomy(const std::string& path) {
  return path.empty() ? curation::default_taxonomy() : curation::load_taxonomy(path);
}

int RunIngest(const IngestArgs& a, std::ostream& out) {
  std::vector<ingest::CorpusSegment> all;
  const auto docs = ingest::load_corpus(a.manifest);
  for (const auto& doc : docs) {
    auto segs = ingest::segment(doc, a.budget);
    all.insert(all.end(), segs.begin(), segs.end());
  }
  ingest::write_segments(a.out, all);
  out << "ingested " << docs.size() << " documents into " << all.size() << " segments\n";
  return kOk;
}

// Shared by `generate` and `pipeline`. Returns the exit code.
int Generate(const std::vector<ingest::CorpusSegment>& segments, gen::GenerationConfig cfg,
             const ProviderArgs& pa, std::uint64_t seed, const std::string& out_path,
             const std::string& audit_path, std::vector<McqPair>* pairs_out,
             std::ostream& out, std::ostream& err) {
  cfg.model = pa.mock && cfg.model.empty() ? "mock" : cfg.model;
  cfg.validate();
  auto provider = MakeProvider(pa, seed);
  auto result = gen::generate_pairs(segments, cfg, *provider);
  io::write_pairs(out_path, result.pairs);
  if (!audit_path.empty()) {
    std::vector<json> records;
    for (const auto& r : result.records) records.push_back(gen::to_json(r));
    io::write_jsonl(audit_path, records);
  }
  for (const auto& r : result.records) {
    if (!r.ok) err << "segment " << r.segment_index << " failed after " << r.attempts
                   << " attempts: " << r.error << "\n";
  }
  out << "generated " << result.pairs.size() << " pairs from " << segments.size()
      << " segments (" << result.failures() << " failed)\n";
  if (pairs_out) *pairs_out = std::move(result.pairs);
  if (!segments.empty() && result.failures() == segments.size()) return kProviderExhausted;
  return kOk;
}

int RunGenerate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  return Generate(ingest::read_segments(a.in), a.cfg, a.provider, a.seed, a.out, a.audit,
                  nullptr, out, err);
}

// Reads every record it can; unreadable lines become issues.
std::pair<std::vector<McqPair>, std::vector<Issue>> ReadLenient(const std::string& path) {
  ParseOptions opts;
  opts.check_invariants = false;
  std::vector<McqPair> pairs;
  std::vector<Issue> issues;
  for (const auto& line : io::read_lines(path)) {
    try {
      pairs.push_back(parse(line.text, opts));
    } catch (const ValidationError& e) {
      issues.push_back({"line:" + std::to_string(line.number), e.path(), e.message()});
    }
  }
  return {std::move(pairs), std::move(issues)};
}

int RunValidate(const ValidateArgs& a, std::ostream& out) {
  auto [pairs, issues] = ReadLenient(a.in);
  const std::size_t total = pairs.size() + issues.size();
  auto result = curation::validate(pairs);
  issues.insert(issues.end(), result.issues.begin(), result.issues.end());

  json report_issues = json::array();
  for (const auto& i : issues) {
    report_issues.push_back({{"id", i.id}, {"path", i.path}, {"message", i.message}});
  }
  io::write_json(a.out, {{"input", a.in},
                         {"total", total},
                         {"valid", result.valid.size()},
                         {"invalid", total - result.valid.size()},
                         {"issues", report_issues}});
  if (!a.valid.empty()) io::write_pairs(a.valid, result.valid);
  out << result.valid.size() << "/" << total << " pairs valid, " << issues.size()
      << " issues\n";
  return issues.empty() ? kOk : kValidationFailure;
}

int RunDedupe(const InOutArgs& a, std::ostream& out) {
  const auto pairs = io::read_pairs(a.in);
  const auto kept = curation::dedupe(pairs);
  io::write_pairs(a.out, kept);
  out << "kept " << kept.size() << " of " << pairs.size() << " pairs\n";
  return kOk;
}

int RunAugment(const InOutArgs& a, std::ostream& out) {
  const auto pairs = io::read_pairs(a.in);
  const auto boosted = curation::choiceboost_all(pairs);
  io::write_pairs(a.out, boosted);
  out << "augmented " << pairs.size() << " pairs into " << boosted.size() << "\n";
  return kOk;
}

int RunBias(const InOutArgs& a, std::ostream& out) {
  const auto report = curation::position_bias(io::read_pairs(a.in));
  io::write_json(a.out, curation::to_json(report));
  out << "tv_distance " << report.tv_distance << " over " << report.total << " pairs\n";
  return kOk;
}

int RunSplit(const SplitArgs& a, std::ostream& out) {
  const auto s = curation::split(io::read_pairs(a.in), a.fraction, a.seed);
  io::write_pairs(a.train, s.train);
  io::write_pairs(a.test, s.test);
  out << "train " << s.train.size() << ", test " << s.test.size() << "\n";
  return kOk;
}

void WriteSft(const std::string& path, const std::vector<curation::SftRecord>& records) {
  std::vector<json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(curation::to_json(r));
  io::write_jsonl(path, lines);
}

int RunExport(const ExportArgs& a, std::ostream& out) {
  const auto style = curation::parse_style(a.style);
  const auto records = curation::export_sft(io::read_pairs(a.in), style);
  WriteSft(a.out, records);
  out << "exported " << records.size() << " records (" << a.style << ")\n";
  return kOk;
}

int RunStats(const StatsArgs& a, std::ostream& out) {
  const auto report = curation::stats(io::read_pairs(a.in), LoadTaxonomy(a.taxonomy), a.top_k);
  io::write_json(a.out, curation::to_json(report));
  out << "stats over " << report.total << " pairs\n";
  return kOk;
}

int RunCompose(const ComposeArgs& a, std::ostream& out) {
  ProblemSet easy{Stem(a.easy), Tier::kEasy, io::read_pairs(a.easy), {}};
  ProblemSet hard{Stem(a.hard), Tier::kHard, io::read_pairs(a.hard), {}};
  const auto comp = eval::compose_comprehensive(easy, hard, a.seed, a.name);
  io::write_pairs(a.out, comp.pairs);
  if (!a.meta.empty()) {
    io::write_json(a.meta, {{"name", comp.name},
                            {"tier", to_string(comp.tier)},
                            {"size", comp.pairs.size()},
                            {"created_from", to_json(comp.created_from)}});
  }
  out << "comprehensive set of " << comp.pairs.size() << " pairs ("
      << comp.created_from.sample_sizes[0] << " easy + " << comp.created_from.sample_sizes[1]
      << " hard)\n";
  return kOk;
}

int RunEval(const EvalArgs& a, std::ostream& out) {
  ProblemSet set{a.name.empty() ? Stem(a.set) : a.name, parse_tier(a.tier),
                 io::read_pairs(a.set), {}};
  check_problem_set(set);
  std::unique_ptr<ChatProvider> provider;
  std::unique_ptr<eval::Answerer> answerer;
  if (!a.answerer.empty()) {
    if (!a.provider.endpoint.empty() || a.provider.mock) {
      throw ConfigError("use either --answerer or --endpoint, not both");
    }
    answerer = eval::make_builtin_answerer(a.answerer, a.seed);
  } else {
    if (a.provider.endpoint.empty()) {
      throw ConfigError("an answerer is required: --answerer or --endpoint URL");
    }
    provider = HttpChatProvider::from_env(a.provider.endpoint);
    answerer = std::make_unique<eval::ProviderAnswerer>(*provider, a.provider.model,
                                                        a.temperature, a.max_retries);
  }
  eval::EvalConfig cfg;
  cfg.seed = a.seed;
  cfg.parallelism = a.parallelism;
  const auto run = eval::run_eval(set, *answerer, cfg);
  io::write_json(a.out, eval::to_json(run.report));
  if (!a.items.empty()) {
    std::vector<json> lines;
    for (const auto& r : run.items) lines.push_back(eval::to_json(r));
    io::write_jsonl(a.items, lines);
  }
  out << "accuracy " << run.report.accuracy << " (" << run.report.correct << "/"
      << run.report.total << ", unparsed " << run.report.unparsed << ")\n";
  if (provider && run.report.answered == 0) {
    bool all_errors = true;
    for (const auto& r : run.items) all_errors = all_errors && r.error.has_value();
    if (all_errors) return kProviderExhausted;
  }
  return kOk;
}

int RunServe(const ServeArgs& a, std::ostream& out) {
  review::ReviewStore store(a.store);
  review::ServerOptions opts;
  opts.host = a.host;
  opts.port = a.port;
  if (!a.ui_dir.empty()) opts.ui_dir = a.ui_dir;
  review::ReviewServer server(store, opts);
  out << "serving review API on http://" << a.host << ":" << a.port << "\n" << std::flush;
  if (!server.listen()) throw ConfigError("cannot bind " + a.host + ":" + std::to_string(a.port));
  return kOk;
}

int RunSample(const SampleArgs& a, std::ostream& out) {
  review::ReviewStore store(a.store);
  const auto s = store.create_session_from_file(a.in, a.size, a.seed);
  if (!a.out.empty()) io::write_json(a.out, review::to_json(s));
  out << s.id << "\n";
  return kOk;
}

int RunPipeline(const PipelineArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path dir = a.out_dir;
  const auto taxonomy = LoadTaxonomy(a.taxonomy);
  const auto style = curation::parse_style(a.style);

  std::vector<ingest::CorpusSegment> segments;
  for (const auto& doc : ingest::load_corpus(a.manifest)) {
    auto segs = ingest::segment(doc, a.budget);
    segments.insert(segments.end(), segs.begin(), segs.end());
  }
  ingest::write_segments(dir / "segments.jsonl", segments);

  std::vector<McqPair> generated;
  const int gen_code = Generate(segments, a.cfg, a.provider, a.seed,
                                (dir / "generated.jsonl").string(),
                                (dir / "generation_audit.jsonl").string(), &generated, out, err);
  if (gen_code != kOk) return gen_code;

  auto checked = curation::validate(generated);
  json issues = json::array();
  for (const auto& i : checked.issues) {
    issues.push_back({{"id", i.id}, {"path", i.path}, {"message", i.message}});
  }
  io::write_json(dir / "validation_report.json",
                 {{"total", generated.size()}, {"valid", checked.valid.size()}, {"issues", issues}});
  auto validated = curation::tag_subdomains(curation::dedupe(checked.valid), taxonomy);
  io::write_pairs(dir / "validated.jsonl", validated);

  const auto parts = curation::split(validated, a.fraction, a.seed);
  io::write_pairs(dir / "train.jsonl", parts.train);
  io::write_pairs(dir / "test.jsonl", parts.test);
  const auto augmented = curation::choiceboost_all(parts.train);
  io::write_pairs(dir / "train_augmented.jsonl", augmented);
  WriteSft((dir / "sft_train.jsonl").string(), curation::export_sft(augmented, style));

  io::write_json(dir / "bias_train.json", curation::to_json(curation::position_bias(parts.train)));
  io::write_json(dir / "bias_train_augmented.json",
                 curation::to_json(curation::position_bias(augmented)));
  io::write_json(dir / "stats.json", curation::to_json(curation::stats(validated, taxonomy)));

  DatasetManifest m;
  m.raw = generated.size();
  m.validated = validated.size();
  m.test = parts.test.size();
  m.train_pre_augment = parts.train.size();
  m.train_augmented = augmented.size();
  m.choiceboost_applied = true;
  m.split_seed = a.seed;
  m.split_fraction = a.fraction;
  m.taxonomy = taxonomy.name;
  m.tool_version = std::string(tool_version());
  check_manifest(m);
  io::write_json(dir / "manifest.json", to_json(m));

  out << "pipeline: " << m.raw << " raw, " << m.validated << " validated, " << m.test
      << " test, " << m.train_pre_augment << " train -> " << m.train_augmented
      << " augmented\n";
  return checked.issues.empty() ? kOk : kValidationFailure;
}

void AddProviderFlags(CLI::App* sub, ProviderArgs& p) {
  sub->add_option("--endpoint", p.endpoint,
                  "OpenAI-compatible base URL; POSTs to {endpoint}/chat/completions "
                  "with the bearer token from RAC_API_KEY");
  sub->add_flag("--mock", p.mock, "Use the deterministic offline mock provider");
  sub->add_option("--model", p.model, "Model name sent to the endpoint")->capture_default_str();
}

void AddGenerationFlags(CLI::App* sub, gen::GenerationConfig& c) {
  sub->add_option("--questions-per-segment", c.questions_per_segment)->capture_default_str();
  sub->add_option("--max-retries", c.max_retries)->capture_default_str();
  sub->add_option("--parallelism", c.parallelism)->capture_default_str();
  sub->add_option("--temperature", c.temperature)->capture_default_str();
  sub->add_option("--top-p", c.top_p)->capture_default_str();
  sub->add_option("--frequency-penalty", c.frequency_penalty)->capture_default_str();
  sub->add_option("--presence-penalty", c.presence_penalty)->capture_default_str();
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rac-forge: build annotated multiple-choice datasets and "
               "evaluate answering models"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  IngestArgs ingest_a;
  auto* ingest_cmd = app.add_subcommand("ingest", "Clean and segment book text into segment records");
  ingest_cmd->add_option("--manifest", ingest_a.manifest, "JSON mapping text file -> book id")
      ->required();
  ingest_cmd->add_option("--out", ingest_a.out, "Segments JSONL")->required();
  ingest_cmd->add_option("--budget", ingest_a.budget, "Token budget per segment (>= 64)")
      ->capture_default_str();

  GenerateArgs gen_a;
  gen_a.cfg.model = "";
  auto* gen_cmd = app.add_subcommand("generate", "Generate RaC pairs from segments");
  gen_cmd->add_option("--in", gen_a.in, "Segments JSONL")->required();
  gen_cmd->add_option("--out", gen_a.out, "Pair-record JSONL")->required();
  gen_cmd->add_option("--audit", gen_a.audit, "Batch audit log JSONL");
  gen_cmd->add_option("--seed", gen_a.seed, "Mock provider seed")->capture_default_str();
  AddProviderFlags(gen_cmd, gen_a.provider);
  AddGenerationFlags(gen_cmd, gen_a.cfg);

  ValidateArgs val_a;
  auto* val_cmd = app.add_subcommand("validate", "Check pairs against structural rules");
  val_cmd->add_option("--in", val_a.in, "Pair-record JSONL")->required();
  val_cmd->add_option("--out", val_a.out, "Issue report JSON")->required();
  val_cmd->add_option("--valid", val_a.valid, "Write the valid pairs here");

  InOutArgs dedupe_a;
  auto* dedupe_cmd = app.add_subcommand("dedupe", "Drop pairs repeating an earlier question");
  dedupe_cmd->add_option("--in", dedupe_a.in)->required();
  dedupe_cmd->add_option("--out", dedupe_a.out)->required();

  InOutArgs aug_a;
  auto* aug_cmd = app.add_subcommand("augment", "ChoiceBoost: four answer-position variants per pair");
  aug_cmd->add_option("--in", aug_a.in)->required();
  aug_cmd->add_option("--out", aug_a.out)->required();

  InOutArgs bias_a;
  auto* bias_cmd = app.add_subcommand("bias", "Answer-position bias report");
  bias_cmd->add_option("--in", bias_a.in)->required();
  bias_cmd->add_option("--out", bias_a.out, "Bias report JSON")->required();

  SplitArgs split_a;
  auto* split_cmd = app.add_subcommand("split", "Seeded train/test split");
  split_cmd->add_option("--in", split_a.in)->required();
  split_cmd->add_option("--train", split_a.train)->required();
  split_cmd->add_option("--test", split_a.test)->required();
  split_cmd->add_option("--fraction", split_a.fraction, "Test fraction in (0, 1)")
      ->capture_default_str();
  split_cmd->add_option("--seed", split_a.seed)->capture_default_str();

  ExportArgs export_a;
  auto* export_cmd = app.add_subcommand("export-sft", "Write prompt/response training records");
  export_cmd->add_option("--in", export_a.in)->required();
  export_cmd->add_option("--out", export_a.out)->required();
  export_cmd->add_option("--style", export_a.style, "rac or plain")->capture_default_str();

  StatsArgs stats_a;
  auto* stats_cmd = app.add_subcommand("stats", "Sub-domain distribution and term frequencies");
  stats_cmd->add_option("--in", stats_a.in)->required();
  stats_cmd->add_option("--out", stats_a.out, "Stats report JSON")->required();
  stats_cmd->add_option("--taxonomy", stats_a.taxonomy, "Taxonomy JSON (default: built-in)");
  stats_cmd->add_option("--top-k", stats_a.top_k)->capture_default_str();

  ComposeArgs comp_a;
  auto* comp_cmd = app.add_subcommand("compose-comprehensive",
                                      "Merge a down-sampled easy set with the hard set");
  comp_cmd->add_option("--easy", comp_a.easy)->required();
  comp_cmd->add_option("--hard", comp_a.hard)->required();
  comp_cmd->add_option("--out", comp_a.out)->required();
  comp_cmd->add_option("--meta", comp_a.meta, "Provenance JSON");
  comp_cmd->add_option("--name", comp_a.name)->capture_default_str();
  comp_cmd->add_option("--seed", comp_a.seed)->capture_default_str();

  EvalArgs eval_a;
  auto* eval_cmd = app.add_subcommand("eval", "Score an answering model on a problem set");
  eval_cmd->add_option("--set", eval_a.set, "Problem-set JSONL")->required();
  eval_cmd->add_option("--out", eval_a.out, "Report JSON")->required();
  eval_cmd->add_option("--items", eval_a.items, "Per-item audit JSONL");
  eval_cmd->add_option("--name", eval_a.name, "Set name (default: file stem)");
  eval_cmd->add_option("--tier", eval_a.tier, "easy, hard or comprehensive")->capture_default_str();
  eval_cmd->add_option("--answerer", eval_a.answerer, "oracle, random or constant:A..D");
  eval_cmd->add_option("--endpoint", eval_a.provider.endpoint, "OpenAI-compatible base URL");
  eval_cmd->add_option("--model", eval_a.provider.model)->capture_default_str();
  eval_cmd->add_option("--temperature", eval_a.temperature)->capture_default_str();
  eval_cmd->add_option("--max-retries", eval_a.max_retries)->capture_default_str();
  eval_cmd->add_option("--parallelism", eval_a.parallelism)->capture_default_str();
  eval_cmd->add_option("--seed", eval_a.seed)->capture_default_str();

  auto* review_cmd = app.add_subcommand("review", "Human review of sampled pairs");
  review_cmd->require_subcommand(1);
  ServeArgs serve_a;
  auto* serve_cmd = review_cmd->add_subcommand("serve", "Serve the review HTTP API");
  serve_cmd->add_option("--store", serve_a.store, "Session directory")->required();
  serve_cmd->add_option("--host", serve_a.host)->capture_default_str();
  serve_cmd->add_option("--port", serve_a.port)->capture_default_str();
  serve_cmd->add_option("--ui-dir", serve_a.ui_dir, "Static review UI bundle");
  SampleArgs sample_a;
  auto* sample_cmd = review_cmd->add_subcommand("sample", "Create a review session offline");
  sample_cmd->add_option("--in", sample_a.in, "Pair-record JSONL")->required();
  sample_cmd->add_option("--store", sample_a.store, "Session directory")->required();
  sample_cmd->add_option("--out", sample_a.out, "Session record JSON");
  sample_cmd->add_option("--size", sample_a.size)->capture_default_str();
  sample_cmd->add_option("--seed", sample_a.seed)->capture_default_str();

  PipelineArgs pipe_a;
  pipe_a.cfg.model = "";
  auto* pipe_cmd = app.add_subcommand(
      "pipeline", "ingest -> generate -> validate -> dedupe -> split -> augment -> export-sft");
  pipe_cmd->add_option("--manifest", pipe_a.manifest)->required();
  pipe_cmd->add_option("--out-dir", pipe_a.out_dir)->required();
  pipe_cmd->add_option("--taxonomy", pipe_a.taxonomy);
  pipe_cmd->add_option("--style", pipe_a.style)->capture_default_str();
  pipe_cmd->add_option("--budget", pipe_a.budget)->capture_default_str();
  pipe_cmd->add_option("--fraction", pipe_a.fraction)->capture_default_str();
  pipe_cmd->add_option("--seed", pipe_a.seed)->capture_default_str();
  AddProviderFlags(pipe_cmd, pipe_a.provider);
  AddGenerationFlags(pipe_cmd, pipe_a.cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (*ingest_cmd) return RunIngest(ingest_a, out);
    if (*gen_cmd) {
      if (gen_a.cfg.model.empty()) gen_a.cfg.model = gen_a.provider.mock ? "mock" : gen_a.provider.model;
      return RunGenerate(gen_a, out, err);
    }
    if (*val_cmd) return RunValidate(val_a, out);
    if (*dedupe_cmd) return RunDedupe(dedupe_a, out);
    if (*aug_cmd) return RunAugment(aug_a, out);
    if (*bias_cmd) return RunBias(bias_a, out);
    if (*split_cmd) return RunSplit(split_a, out);
    if (*export_cmd) return RunExport(export_a, out);
    if (*stats_cmd) return RunStats(stats_a, out);
    if (*comp_cmd) return RunCompose(comp_a, out);
    if (*eval_cmd) return RunEval(eval_a, out);
    if (*serve_cmd) return RunServe(serve_a, out);
    if (*sample_cmd) return RunSample(sample_a, out);
    if (*pipe_cmd) {
      if (pipe_a.cfg.model.empty()) pipe_a.cfg.model = pipe_a.provider.mock ? "mock" : pipe_a.provider.model;
      return RunPipeline(pipe_a, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ProviderError& e) {
    err << "error: " << e.what() << "\n";
    return kProviderExhausted;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  err << app.help();
  return kConfigError;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("rac-forge");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rac::cli
