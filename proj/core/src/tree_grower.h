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

#ifndef MRF_SRC_TREE_GROWER_H_
#define MRF_SRC_TREE_GROWER_H_

#include <optional>
#include <span>
#include <vector>

#include "mrf/dataset.h"
#include "mrf/impurity.h"
#include "mrf/random.h"
#include "mrf/tree.h"

namespace mrf::internal {

// Read access to the node being expanded. Candidate lists are computed on
// first request from the presorted per-feature slices.
class NodeContext {
 public:
  int depth = 0;
  ClassCounts structure_counts;
  ClassCounts estimation_counts;

  std::size_t structure_size() const { return static_cast<std::size_t>(structure_counts.total()); }
  std::size_t estimation_size() const { return static_cast<std::size_t>(estimation_counts.total()); }
  int num_features() const { return static_cast<int>(sorted_.size()); }

  const std::vector<SplitCandidate>& Candidates(int feature);

  // Estimation rows of this node with value <= threshold on `feature`.
  std::int64_t EstimationLeftCount(int feature, double threshold) const;

 private:
  friend class TreeGrower;

  const Dataset* data_ = nullptr;
  Criterion criterion_ = Criterion::kGini;
  std::vector<std::span<const RowIndex>> sorted_;
  std::span<const RowIndex> estimation_;
  std::vector<std::vector<SplitCandidate>>* cache_ = nullptr;
  std::vector<char>* cached_ = nullptr;
};

class SplitPolicy {
 public:
  virtual ~SplitPolicy() = default;
  // Called only for nodes below the depth cap with >= 2 structure rows.
  virtual bool WantsSplit(const NodeContext& node) const = 0;
  virtual std::optional<SplitCandidate> Choose(NodeContext& node,
                                               Rng& rng) const = 0;
};

// Recursive partitioning over index slices sorted once per feature and
// filtered downward with stable partitions. Nodes are expanded depth-first,
// left child first, so draws from `rng` happen in a fixed order.
class TreeGrower {
 public:
  TreeGrower(const Dataset& data, std::span<const RowIndex> structure,
             std::span<const RowIndex> estimation, Criterion criterion,
             std::optional<int> max_depth);

  Tree Grow(const SplitPolicy& policy, Rng& rng);

 private:
  struct Frame {
    std::int32_t node;
    std::size_t s_begin, s_end;
    std::size_t e_begin, e_end;
    int depth;
    std::vector<double> parent_eta;
  };

  void PartitionSlices(const Frame& frame, const SplitCandidate& split,
                       std::size_t& s_mid, std::size_t& e_mid);

  const Dataset& data_;
  Criterion criterion_;
  std::optional<int> max_depth_;
  std::vector<std::vector<RowIndex>> sorted_;
  std::vector<RowIndex> estimation_;
  std::vector<char> goes_left_;
  std::vector<RowIndex> buffer_;
  std::vector<std::vector<SplitCandidate>> cache_;
  std::vector<char> cached_;
};

}  // namespace mrf::internal

#endif  // MRF_SRC_TREE_GROWER_H_
