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

#ifndef MRF_TESTS_INVARIANTS_H_
#define MRF_TESTS_INVARIANTS_H_

#include <optional>
#include <set>
#include <string>

#include "mrf/forest.h"
#include "test_util.h"

namespace mrf::testing {

// Each check draws one random case from `seed` and returns a description
// of the violation, or nullopt.
using Violation = std::optional<std::string>;

inline constexpr int kPropertyCases = 100;

struct RandomCase {
  Dataset data;
  MrfConfig config;
};

inline Concentration RandomConcentration(Rng& rng) {
  switch (rng.UniformInt(4)) {
    case 0:
      return Concentration(0.0);
    case 1:
      return Concentration::Infinite();
    default:
      return Concentration(rng.Uniform01() * 20.0);
  }
}

inline RandomCase DrawCase(std::uint64_t seed) {
  Rng rng(seed);
  const int k = 1 + static_cast<int>(rng.UniformInt(6));
  const std::size_t n = 2 * static_cast<std::size_t>(k) + rng.UniformInt(150);
  const std::size_t d = 1 + rng.UniformInt(4);
  const int classes = 2 + static_cast<int>(rng.UniformInt(3));
  const int levels = rng.UniformInt(2) == 0 ? 0 : 2 + static_cast<int>(rng.UniformInt(6));
  RandomCase c{RandomDataset(rng, n, d, classes, levels, rng.UniformInt(2) == 0), {}};
  c.config.min_leaf = k;
  c.config.num_trees = 1 + static_cast<int>(rng.UniformInt(4));
  c.config.b1 = RandomConcentration(rng);
  c.config.b2 = RandomConcentration(rng);
  c.config.b3 = RandomConcentration(rng);
  c.config.partition_rate = 0.5 + rng.Uniform01() * 1.5;
  c.config.criterion = rng.UniformInt(2) == 0 ? Criterion::kGini : Criterion::kEntropy;
  if (rng.UniformInt(3) == 0) c.config.max_depth = static_cast<int>(rng.UniformInt(6));
  if (rng.UniformInt(5) == 0) c.config.privacy = PrivacySettings{0.5 + rng.Uniform01() * 5, 0.5};
  c.config.seed = rng.NextU64();
  c.config.num_threads = 1;
  // Partition must leave each side nonempty.
  const std::size_t s = StructureSize(n, c.config.partition_rate);
  if (s == 0 || s >= n) c.config.partition_rate = 1.0;
  return c;
}

inline Violation CheckLeafOccupancy(std::uint64_t seed) {
  const RandomCase c = DrawCase(seed);
  const Forest forest = TrainMrf(c.data, c.config);
  const std::size_t structure = StructureSize(c.data.num_rows(), c.config.partition_rate);
  const auto estimation = static_cast<std::int64_t>(c.data.num_rows() - structure);
  for (const Tree& tree : forest.trees()) {
    if (tree.root().counts.total() != estimation) return "root does not hold all estimation rows";
    for (const TreeNode& node : tree.nodes()) {
      if (node.is_leaf() && tree.nodes().size() > 1 &&
          node.counts.total() < c.config.min_leaf) {
        return "leaf with " + std::to_string(node.counts.total()) + " < k = " +
               std::to_string(c.config.min_leaf) + " estimation rows";
      }
      if (!node.is_leaf()) {
        const TreeNode& l = tree.nodes()[static_cast<std::size_t>(node.left)];
        const TreeNode& r = tree.nodes()[static_cast<std::size_t>(node.right)];
        if (l.counts.total() + r.counts.total() != node.counts.total()) {
          return std::string("children do not conserve estimation rows");
        }
      }
    }
  }
  return std::nullopt;
}

inline Violation CheckVoteConservation(std::uint64_t seed) {
  const RandomCase c = DrawCase(seed);
  const Forest forest = TrainMrf(c.data, c.config);
  const auto rows = Iota(c.data.num_rows());
  const BatchPrediction p = PredictBatch(forest, c.data, rows, seed);
  if (p.votes.size() != p.num_trees * p.num_rows) return "vote matrix has wrong shape";
  for (std::size_t r = 0; r < p.num_rows; ++r) {
    std::vector<int> tally(static_cast<std::size_t>(forest.num_classes()), 0);
    for (std::size_t t = 0; t < p.num_trees; ++t) {
      const int v = p.vote(t, r);
      if (v < 0 || v >= forest.num_classes()) return "vote out of class range";
      ++tally[static_cast<std::size_t>(v)];
    }
    if (std::accumulate(tally.begin(), tally.end(), 0) != static_cast<int>(p.num_trees)) {
      return "votes do not sum to the tree count";
    }
    if (p.classes[r] != MajorityVote(tally)) return "class is not the vote majority";
  }
  return std::nullopt;
}

inline Violation CheckPartitionDisjointness(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.UniformInt(500);
  const double rate = 0.2 + rng.Uniform01() * 3.0;
  const std::size_t s = StructureSize(n, rate);
  if (s == 0 || s >= n) return std::nullopt;
  std::vector<RowIndex> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<RowIndex>(3 * i + 1);
  const Partition p = PartitionRows(rows, rate, rng);
  if (p.structure.size() != s) return "structure size breaks the rounding rule";
  std::set<RowIndex> seen;
  for (RowIndex r : p.structure) seen.insert(r);
  for (RowIndex r : p.estimation) {
    if (!seen.insert(r).second) return "row in both structure and estimation";
  }
  if (seen != std::set<RowIndex>(rows.begin(), rows.end())) return "partition loses rows";

  const int folds = 2 + static_cast<int>(rng.UniformInt(std::min<std::size_t>(n - 1, 9)));
  const FoldPlan plan = MakeFolds(n, folds, 2, seed);
  for (int r = 0; r < 2; ++r) {
    std::set<RowIndex> tested;
    for (int f = 0; f < folds; ++f) {
      const FoldAssignment& a = plan.at(r, f);
      if (a.train.size() + a.test.size() != n) return "fold sizes do not reconstruct n";
      for (RowIndex i : a.test) {
        if (!tested.insert(i).second) return "row tested twice in one repeat";
      }
    }
    if (tested.size() != n) return "some row never tested";
  }
  return std::nullopt;
}

inline Violation CheckDeterminism(std::uint64_t seed) {
  RandomCase c = DrawCase(seed);
  const Forest a = TrainMrf(c.data, c.config);
  c.config.num_threads = 3;
  const Forest b = TrainMrf(c.data, c.config);
  if (a.trees() != b.trees()) return "forest depends on thread count";
  const auto rows = Iota(c.data.num_rows());
  const BatchPrediction pa = PredictBatch(a, c.data, rows, seed);
  const BatchPrediction pb = PredictBatch(b, c.data, rows, seed);
  if (pa.votes != pb.votes || pa.classes != pb.classes) return "predictions differ";
  BaselineConfig baseline;
  baseline.num_trees = 3;
  baseline.min_leaf = c.config.min_leaf;
  baseline.seed = seed;
  if (TrainBaselineRf(c.data, baseline).trees() != TrainBaselineRf(c.data, baseline).trees()) {
    return "baseline forest is not reproducible";
  }
  return std::nullopt;
}

inline Violation CheckSerializationRoundTrip(std::uint64_t seed) {
  const RandomCase c = DrawCase(seed);
  const Forest forest = TrainMrf(c.data, c.config);
  const std::string text = ForestToJson(forest);
  const Forest back = ForestFromJson(text);
  if (!(back == forest)) return "forest changes across a JSON round trip";
  if (ForestToJson(back) != text) return "re-serialized forest differs";
  const auto rows = Iota(c.data.num_rows());
  if (PredictBatch(back, c.data, rows, seed).votes !=
      PredictBatch(forest, c.data, rows, seed).votes) {
    return "restored forest predicts differently";
  }
  return std::nullopt;
}

}  // namespace mrf::testing

#endif  // MRF_TESTS_INVARIANTS_H_
