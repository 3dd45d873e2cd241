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

#ifndef MRF_TREE_H_
#define MRF_TREE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrf/dataset.h"
#include "mrf/impurity.h"
#include "mrf/random.h"
#include "mrf/split_selection.h"

namespace mrf {

// Flat node storage. Internal nodes have feature >= 0 and child ids; leaves
// have feature == -1 and carry the estimation counts and eta.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  int depth = 0;
  ClassCounts counts;
  std::vector<double> eta;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

class Tree {
 public:
  Tree() = default;
  Tree(int num_classes, std::vector<TreeNode> nodes);

  int num_classes() const { return num_classes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }

  // Leaf reached by x: left iff x[feature] <= threshold.
  const TreeNode& Route(std::span<const double> x) const;

  // Maximum leaf depth; a root-only tree has depth 0.
  int depth() const { return depth_; }
  std::size_t num_leaves() const;

  bool operator==(const Tree& other) const {
    return num_classes_ == other.num_classes_ && nodes_ == other.nodes_;
  }

 private:
  int num_classes_ = 0;
  std::vector<TreeNode> nodes_;
  int depth_ = 0;
};

int TreeDepth(const Tree& tree);

struct TreeParams {
  Concentration b1{10.0};
  Concentration b2{10.0};
  int min_leaf = 5;
  Criterion criterion = Criterion::kGini;
  std::optional<int> max_depth;
  // Sampling attempts per node before a node whose draws keep violating the
  // leaf-occupancy rule becomes a leaf.
  int max_attempts = 10;
};

// Builds one tree: splits chosen on `structure`, leaf distributions
// estimated from `estimation`. A node splits while it holds more than
// min_leaf estimation rows and is above max_depth. A drawn split is
// accepted only if each child receives >= min_leaf estimation rows.
Tree BuildMrfTree(const Dataset& data, std::span<const RowIndex> structure,
                  std::span<const RowIndex> estimation, const TreeParams& params,
                  Rng& rng);

// Empirical label distribution of `rows`; `fallback` when rows is empty.
std::vector<double> LeafDistribution(const Dataset& data,
                                     std::span<const RowIndex> rows,
                                     std::span<const double> fallback);
std::vector<double> LeafDistribution(const ClassCounts& counts,
                                     std::span<const double> fallback);

// Exponential-mechanism label draw: P(c) proportional to exp(B3 eta_c / 2).
// Infinite B3 returns argmax eta with the lowest-index tie-break and
// consumes no randomness.
int SampleLabel(std::span<const double> eta, Concentration b3, Rng& rng);

int PredictTree(const Tree& tree, std::span<const double> x, Concentration b3,
                Rng& rng);

std::string TreeToJson(const Tree& tree);
Tree TreeFromJson(const std::string& text);

}  // namespace mrf

#endif  // MRF_TREE_H_
