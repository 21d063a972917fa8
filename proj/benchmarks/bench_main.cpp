#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "claimcheck/bench/bench.hpp"
#include "claimcheck/classifier/features.hpp"
#include "claimcheck/classifier/model.hpp"
#include "claimcheck/corpus/split.hpp"
#include "claimcheck/preprocess/pipeline.hpp"

namespace {

using namespace claimcheck;

const std::vector<Post>& corpus() {
  static const auto posts = bench::synth_corpus(2000, 42);
  return posts;
}

classifier::ScorerModel random_model() {
  classifier::ScorerModel model;
  std::mt19937_64 rng(7);
  std::normal_distribution<float> dist(0.0f, 0.1f);
  for (auto& w : model.weights()) w = dist(rng);
  return model;
}

void BM_Featurize(benchmark::State& state) {
  const classifier::HashingParams params;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classifier::featurize(corpus()[i++ % corpus().size()].text, params));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Featurize);

void BM_Score(benchmark::State& state) {
  const auto model = random_model();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.score(corpus()[i++ % corpus().size()].text));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Score);

void BM_Clean(benchmark::State& state) {
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(preprocess::clean_text(corpus()[i++ % corpus().size()].text));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Clean);

// One classification pass over the first n posts.
void BM_ScoreBatch(benchmark::State& state) {
  const auto model = random_model();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    for (std::size_t i = 0; i < n; ++i) benchmark::DoNotOptimize(model.score(corpus()[i].text));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreBatch)->Arg(100)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Split(benchmark::State& state) {
  const auto spec = corpus::SplitSpec::with_fractions(0.6, 0.2, 0.2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(corpus::assign_folds(corpus(), spec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_Split)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
