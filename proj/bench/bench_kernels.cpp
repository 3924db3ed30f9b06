#include <benchmark/benchmark.h>

#include <vector>

#include "vaep/dataset.hpp"
#include "vaep/forest.hpp"
#include "vaep/model.hpp"
#include "vaep/synth.hpp"
#include "vaep/valuation.hpp"

namespace {

const std::vector<vaep::Game>& corpus() {
  static const auto games = vaep::synth::generate_corpus({.seed = 7, .n_games = 12});
  return games;
}

const vaep::Dataset& dataset() {
  static const auto d = vaep::build_dataset(corpus(), 3, 10);
  return d;
}

vaep::ForestParams bench_params() {
  vaep::ForestParams p;
  p.n_trees = 16;
  p.seed = 3;
  return p;
}

const vaep::ForestModel& forest() {
  static const auto m = vaep::train_forest(dataset().features, dataset().scores, bench_params());
  return m;
}

void BM_BuildDataset_Serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(vaep::serial::build_dataset(corpus(), 3, 10));
}
void BM_BuildDataset_Parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(vaep::build_dataset(corpus(), 3, 10));
}

void BM_TrainForest_Serial(benchmark::State& st) {
  const auto& d = dataset();
  for (auto _ : st) benchmark::DoNotOptimize(vaep::serial::train_forest(d.features, d.scores, bench_params()));
}
void BM_TrainForest_Parallel(benchmark::State& st) {
  const auto& d = dataset();
  for (auto _ : st) benchmark::DoNotOptimize(vaep::train_forest(d.features, d.scores, bench_params()));
}

void BM_PredictForest_Serial(benchmark::State& st) {
  const auto& m = forest();
  for (auto _ : st) benchmark::DoNotOptimize(vaep::serial::predict_forest(m, dataset().features));
  st.SetItemsProcessed(st.iterations() * std::int64_t(dataset().features.rows));
}
void BM_PredictForest_Parallel(benchmark::State& st) {
  const auto& m = forest();
  for (auto _ : st) benchmark::DoNotOptimize(vaep::predict_forest(m, dataset().features));
  st.SetItemsProcessed(st.iterations() * std::int64_t(dataset().features.rows));
}

void BM_ValueGames_Serial(benchmark::State& st) {
  const vaep::Model ms{vaep::Target::scores, forest()};
  const vaep::Model mc{vaep::Target::concedes, forest()};
  for (auto _ : st) benchmark::DoNotOptimize(vaep::serial::value_games(corpus(), ms, mc));
}
void BM_ValueGames_Parallel(benchmark::State& st) {
  const vaep::Model ms{vaep::Target::scores, forest()};
  const vaep::Model mc{vaep::Target::concedes, forest()};
  for (auto _ : st) benchmark::DoNotOptimize(vaep::value_games(corpus(), ms, mc));
}

}  // namespace

BENCHMARK(BM_BuildDataset_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildDataset_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainForest_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainForest_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictForest_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictForest_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ValueGames_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ValueGames_Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
