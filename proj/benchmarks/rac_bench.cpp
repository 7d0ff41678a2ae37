#include <benchmark/benchmark.h>

#include "rac/curation.hpp"
#include "rac/ingest.hpp"
#include "rac/model.hpp"

namespace {

std::vector<rac::McqPair> Pairs(std::size_t n) {
  std::vector<rac::McqPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rac::McqPair p;
    p.question = "Which layer handles case " + std::to_string(i) + "?";
    p.choices = {"transport " + std::to_string(i), "network " + std::to_string(i),
                 "data link " + std::to_string(i), "physical " + std::to_string(i)};
    p.correct_label = rac::label_at(i % 4);
    p.rephrase = "Restated question " + std::to_string(i);
    for (rac::Label l : rac::kLabels) p.explanations[l] = "Because of reason " + std::to_string(i);
    out.push_back(rac::with_id(std::move(p)));
  }
  return out;
}

void BM_ChoiceBoost(benchmark::State& state) {
  const auto pairs = Pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rac::curation::choiceboost_all(pairs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ChoiceBoost)->Arg(1000)->Arg(14363)->Unit(benchmark::kMillisecond);

void BM_Split(benchmark::State& state) {
  const auto pairs = Pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rac::curation::split(pairs, 0.05, 42));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Split)->Arg(15119)->Unit(benchmark::kMillisecond);

void BM_SerializeParse(benchmark::State& state) {
  const auto pairs = Pairs(1000);
  for (auto _ : state) {
    for (const auto& p : pairs) benchmark::DoNotOptimize(rac::parse(rac::serialize(p)));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SerializeParse)->Unit(benchmark::kMillisecond);

void BM_Segment(benchmark::State& state) {
  std::string text;
  for (int s = 0; s < 50; ++s) {
    text += "# Section " + std::to_string(s) + "\n";
    for (int p = 0; p < 40; ++p) {
      text += "Routers exchange advertisements and forward packets along computed paths. "
              "Switches learn addresses from frames.\n\n";
    }
  }
  const rac::ingest::RawDocument doc{"bench", text, {}, {}};
  for (auto _ : state) benchmark::DoNotOptimize(rac::ingest::segment(doc, static_cast<std::size_t>(state.range(0))));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Segment)->Arg(256)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
