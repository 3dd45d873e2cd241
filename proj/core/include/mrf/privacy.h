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

#ifndef MRF_PRIVACY_H_
#define MRF_PRIVACY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mrf/dataset.h"
#include "mrf/impurity.h"

namespace mrf {

// Per-tree hyper-parameters that make a t-tree forest epsilon-DP:
// B1 + B2 = epsilon / (d t), B3 = epsilon / t, d = ceil(|estimation| / k).
struct PrivacyBudget {
  double epsilon = 0.0;
  int num_trees = 0;
  int depth = 0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
};

// `b1_share` is the fraction of each layer's budget given to B1.
// DomainError on non-positive inputs or a share outside (0, 1).
PrivacyBudget AllocateBudget(double epsilon, int num_trees,
                             std::int64_t estimation_size, int min_leaf,
                             double b1_share = 0.5);

// Same allocation with the depth given directly.
PrivacyBudget AllocateBudgetForDepth(double epsilon, int num_trees, int depth,
                                     double b1_share = 0.5);

// Total epsilon: t * max(d * (B1 + B2), B3). Layers compose sequentially
// within a tree, structure and estimation phases in parallel, trees
// sequentially.
double ComposeBudget(double per_layer, int depth, double b3, int num_trees);

struct AuditReport {
  std::string mechanism;
  double budget = 0.0;
  double worst_ratio = 1.0;
  double bound = 1.0;
  bool pass = true;
  // Neighbor change and output achieving worst_ratio.
  std::string witness;
  std::int64_t neighbors_checked = 0;
  // Neighbors whose data-dependent candidate set differs from the
  // original's. The audit holds the output space fixed; these cases are
  // outside what the fixed-space ratio bound speaks to and are counted,
  // not resolved.
  std::int64_t candidate_set_changes = 0;
};

struct AuditOptions {
  // Replacement values tried for every feature of a replaced record, in
  // addition to the record's own value. Empty: {min - 1, midpoint, max + 1}
  // of each feature's observed range.
  std::vector<double> value_grid;
  Criterion criterion = Criterion::kGini;
  bool replace_one = true;
  bool remove_one = true;
};

inline constexpr std::size_t kMaxAuditRows = 32;

// Worst probability ratio of the split-feature mechanism at the root over
// all neighbors of `micro`. SizeError above kMaxAuditRows rows.
AuditReport AuditFeatureMechanism(const Dataset& micro, double b1,
                                  const AuditOptions& options = {});

// Same for the split-value mechanism of `feature`, over a threshold grid
// shared by every neighbor.
AuditReport AuditValueMechanism(const Dataset& micro, int feature, double b2,
                                const AuditOptions& options = {});

// Label mechanism of a leaf: neighbors change or remove one record.
// DomainError for an empty leaf.
AuditReport AuditLabelMechanism(const ClassCounts& leaf_counts, double b3);

std::string AuditReportToJson(const AuditReport& report);

}  // namespace mrf

#endif  // MRF_PRIVACY_H_
