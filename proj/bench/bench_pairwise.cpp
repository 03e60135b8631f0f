// Serial reference vs OpenMP kernel on the upper triangle of a synthetic corpus.

#include <benchmark/benchmark.h>

#include "convdist/conved.hpp"
#include "convdist/pairwise.hpp"
#include "convdist/synth.hpp"

namespace {

struct Fixture {
  convdist::SynthCorpus synth;
  std::unique_ptr<convdist::Measure> conved;
  std::vector<convdist::PairIndex> pairs;

  Fixture() : synth(convdist::synth_corpus(config())) {
    convdist::ConvEDConfig cfg;
    cfg.alpha = convdist::kSgdAlpha;
    conved = convdist::make_conved(synth.corpus, synth.store, cfg);
    pairs = convdist::upper_triangle_pairs(synth.corpus.size());
  }

  static convdist::SynthConfig config() {
    convdist::SynthConfig sc;
    sc.conversations = 120;
    return sc;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_Serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(convdist::evaluate_pairs_serial(*f.conved, f.pairs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.pairs.size()));
}

void BM_Parallel(benchmark::State& state) {
  const auto& f = fixture();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(convdist::evaluate_pairs_parallel(*f.conved, f.pairs, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.pairs.size()));
}

}  // namespace

BENCHMARK(BM_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
