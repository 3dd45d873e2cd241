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

#ifndef MRF_IMPURITY_H_
#define MRF_IMPURITY_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrf/dataset.h"

namespace mrf {

enum class Criterion { kGini, kEntropy };

std::string_view CriterionName(Criterion criterion);
Criterion ParseCriterion(std::string_view name);

// Per-node label tallies.
class ClassCounts {
 public:
  ClassCounts() = default;
  explicit ClassCounts(int num_classes)
      : counts_(static_cast<std::size_t>(num_classes), 0) {}
  explicit ClassCounts(std::vector<std::int64_t> counts);

  void Add(int label, std::int64_t weight = 1) {
    counts_[static_cast<std::size_t>(label)] += weight;
    total_ += weight;
  }
  void Remove(int label) {
    --counts_[static_cast<std::size_t>(label)];
    --total_;
  }

  int num_classes() const { return static_cast<int>(counts_.size()); }
  std::int64_t total() const { return total_; }
  std::int64_t operator[](int c) const {
    return counts_[static_cast<std::size_t>(c)];
  }
  std::span<const std::int64_t> counts() const { return counts_; }

  // Lowest class index among the maxima.
  int Majority() const;

  bool operator==(const ClassCounts&) const = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

// Gini: 1 - sum p^2. Entropy: -sum p log2 p. Throws EmptyNode on total 0.
double Impurity(const ClassCounts& counts, Criterion criterion);

// Parent impurity minus size-weighted child impurities, clamped to 0 when
// it falls within 1e-12 below zero.
double ImpurityDecrease(const ClassCounts& parent, const ClassCounts& left,
                        const ClassCounts& right, Criterion criterion);

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;
  // Number of node rows with value <= threshold.
  std::int64_t left_count = 0;

  bool operator==(const SplitCandidate&) const = default;
};

// Threshold separating two adjacent distinct values lo < hi: their midpoint,
// or lo when the midpoint rounds up to hi. Routing sends lo left, hi right.
double SplitThreshold(double lo, double hi);

// Candidates for `feature` over node rows already sorted by that feature
// (ascending). One candidate per adjacent pair of distinct values, each with
// its exact decrease from a single sweep with running class counts.
// `parent` must be the label tally of `sorted_rows`. Appends to `out`.
void SweepSortedFeature(const Dataset& data,
                        std::span<const RowIndex> sorted_rows, int feature,
                        const ClassCounts& parent, Criterion criterion,
                        std::vector<SplitCandidate>& out);

// Convenience wrapper that sorts `rows` first. Empty for a constant feature.
std::vector<SplitCandidate> CandidateSplits(const Dataset& data,
                                            std::span<const RowIndex> rows,
                                            int feature, Criterion criterion);

ClassCounts CountLabels(const Dataset& data, std::span<const RowIndex> rows);

}  // namespace mrf

#endif  // MRF_IMPURITY_H_
