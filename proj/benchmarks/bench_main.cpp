// Microbenchmarks for the scoring hot paths.

#include <benchmark/benchmark.h>

#include <random>

#include "dmrc/gbdt.hpp"
#include "dmrc/knowledge.hpp"
#include "dmrc/lexical.hpp"

namespace {

using namespace dmrc;

TokenSequence random_context(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(0, 49);
  TokenSequence out(n);
  for (auto& t : out) t = "w" + std::to_string(w(rng));
  return out;
}

void bm_sliding_window(benchmark::State& state) {
  std::mt19937_64 rng(1);
  auto ctx = random_context(static_cast<std::size_t>(state.range(0)), rng);
  WordSet bag = {"w3", "w7", "w11", "w19"};
  auto weights = inverse_count_weights(ctx);
  for (auto _ : state) benchmark::DoNotOptimize(sliding_window_score(ctx, bag, weights));
}
BENCHMARK(bm_sliding_window)->Arg(64)->Arg(256)->Arg(1024);

void bm_distance(benchmark::State& state) {
  std::mt19937_64 rng(2);
  auto ctx = random_context(static_cast<std::size_t>(state.range(0)), rng);
  WordSet q = {"w3", "w7"}, o = {"w11", "w19", "w23"};
  const auto& stops = StopWordList::bundled();
  for (auto _ : state) benchmark::DoNotOptimize(distance_score(ctx, q, o, stops));
}
BENCHMARK(bm_distance)->Arg(64)->Arg(256)->Arg(1024);

void bm_index_build(benchmark::State& state) {
  std::mt19937_64 rng(3);
  auto stream = random_context(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_cooccurrence_index(stream, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_index_build)->Arg(1000)->Arg(10000);

void bm_pmi(benchmark::State& state) {
  std::mt19937_64 rng(4);
  auto index = build_cooccurrence_index(random_context(20000, rng), 10);
  TokenSequence option = {"w1", "w2", "w3"};
  WordSet context = {"w5", "w6", "w7", "w8", "w9", "w10", "w11", "w12"};
  for (auto _ : state) benchmark::DoNotOptimize(pmi_features(option, context, index));
}
BENCHMARK(bm_pmi);

void bm_window_similarity(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  EmbeddingTable table;
  for (int i = 0; i < 50; ++i) {
    std::vector<float> v(64);
    for (auto& x : v) x = u(rng);
    table.insert("w" + std::to_string(i), std::move(v));
  }
  auto ctx = random_context(static_cast<std::size_t>(state.range(0)), rng);
  TokenSequence option = {"w3", "w7", "w11"};
  for (auto _ : state) benchmark::DoNotOptimize(window_similarity(option, ctx, table));
}
BENCHMARK(bm_window_similarity)->Arg(64)->Arg(256);

void bm_gbdt_predict(benchmark::State& state) {
  FeatureLayout layout;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 300; ++i) {
    std::vector<double> row(layout.dim());
    for (auto& v : row) v = u(rng);
    row[0] = i % 3;
    x.push_back(std::move(row));
    y.push_back(i % 3);
  }
  auto model = train_gbdt(x, y, layout, {100, 0.1, 3, 1});
  for (auto _ : state) benchmark::DoNotOptimize(predict_gbdt(model, x[0]));
}
BENCHMARK(bm_gbdt_predict);

}  // namespace

BENCHMARK_MAIN();
