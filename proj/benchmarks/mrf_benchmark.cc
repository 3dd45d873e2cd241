// Copyright 2026 The MRF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "mrf/dataset.h"
#include "mrf/forest.h"
#include "mrf/impurity.h"
#include "mrf/random.h"
#include "mrf/tree.h"

namespace mrf {
namespace {

Dataset SyntheticDataset(std::size_t n, std::size_t d, int classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> values(n * d);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < d; ++j) {
      values[i * d + j] = rng.Uniform01();
      sum += values[i * d + j];
    }
    labels[i] = static_cast<int>(sum / static_cast<double>(d) * classes) % classes;
  }
  std::vector<std::string> names(d);
  for (std::size_t j = 0; j < d; ++j) names[j] = "x" + std::to_string(j);
  std::vector<std::string> class_names(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) class_names[static_cast<std::size_t>(c)] = std::to_string(c);
  return Dataset(std::move(values), std::move(labels), std::move(names), std::move(class_names));
}

std::vector<RowIndex> AllRows(std::size_t n) {
  std::vector<RowIndex> rows(n);
  std::iota(rows.begin(), rows.end(), RowIndex{0});
  return rows;
}

void BM_CandidateSweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset data = SyntheticDataset(n, 1, 3, 1);
  const std::vector<RowIndex> rows = AllRows(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(CandidateSplits(data, rows, 0, Criterion::kGini));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_CandidateSweep)->RangeMultiplier(4)->Range(256, 65536);

void BM_BuildTree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset data = SyntheticDataset(n, 8, 3, 2);
  Rng split(3);
  const Partition p = PartitionDataset(data, 1.0, split);
  TreeParams params;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    Rng rng = Rng::ForStream(4, stream++);
    benchmark::DoNotOptimize(BuildMrfTree(data, p.structure, p.estimation, params, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_BuildTree)->RangeMultiplier(4)->Range(1024, 65536)->Unit(benchmark::kMicrosecond);

void BM_PredictBatch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset data = SyntheticDataset(4096, 8, 3, 5);
  MrfConfig config;
  config.num_threads = 1;
  const Forest forest = TrainMrf(data, config);
  const Dataset queries = SyntheticDataset(n, 8, 3, 6);
  const std::vector<RowIndex> rows = AllRows(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(PredictBatch(forest, queries, rows, 7));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_PredictBatch)->RangeMultiplier(8)->Range(64, 32768)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace mrf

BENCHMARK_MAIN();
