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

#include "mrf/impurity.h"

#include <algorithm>
#include <cmath>

#include "mrf/error.h"

namespace mrf {
namespace {

constexpr double kClampTolerance = 1e-12;

// Impurity from raw counts; total > 0.
double ImpurityOf(std::span<const std::int64_t> counts, std::int64_t total,
                  Criterion criterion) {
  const double inv_total = 1.0 / static_cast<double>(total);
  if (criterion == Criterion::kGini) {
    double sum_sq = 0.0;
    for (std::int64_t c : counts) {
      const double p = static_cast<double>(c) * inv_total;
      sum_sq += p * p;
    }
    return 1.0 - sum_sq;
  }
  double entropy = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) * inv_total;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

double Clamp(double decrease) {
  return (decrease < 0.0 && decrease >= -kClampTolerance) ? 0.0 : decrease;
}

}  // namespace

std::string_view CriterionName(Criterion criterion) {
  return criterion == Criterion::kGini ? "gini" : "entropy";
}

Criterion ParseCriterion(std::string_view name) {
  if (name == "gini") return Criterion::kGini;
  if (name == "entropy") return Criterion::kEntropy;
  Fail(ErrorCode::kConfig, "unknown criterion '" + std::string(name) + "'");
}

ClassCounts::ClassCounts(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)) {
  for (std::int64_t c : counts_) {
    if (c < 0) Fail(ErrorCode::kDomain, "negative class count");
    total_ += c;
  }
}

int ClassCounts::Majority() const {
  int best = 0;
  for (int c = 1; c < num_classes(); ++c) {
    if ((*this)[c] > (*this)[best]) best = c;
  }
  return best;
}

double Impurity(const ClassCounts& counts, Criterion criterion) {
  if (counts.total() <= 0) Fail(ErrorCode::kEmptyNode, "impurity of empty node");
  return ImpurityOf(counts.counts(), counts.total(), criterion);
}

double ImpurityDecrease(const ClassCounts& parent, const ClassCounts& left,
                        const ClassCounts& right, Criterion criterion) {
  if (left.total() + right.total() != parent.total() ||
      left.num_classes() != parent.num_classes() ||
      right.num_classes() != parent.num_classes()) {
    Fail(ErrorCode::kMismatch, "child counts do not add up to the parent");
  }
  for (int c = 0; c < parent.num_classes(); ++c) {
    if (left[c] + right[c] != parent[c]) {
      Fail(ErrorCode::kMismatch, "child counts do not add up to the parent");
    }
  }
  if (left.total() == 0 || right.total() == 0) {
    Fail(ErrorCode::kEmptyChild, "split leaves a child empty");
  }
  const double n = static_cast<double>(parent.total());
  return Clamp(Impurity(parent, criterion) -
               static_cast<double>(left.total()) / n * Impurity(left, criterion) -
               static_cast<double>(right.total()) / n * Impurity(right, criterion));
}

double SplitThreshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

void SweepSortedFeature(const Dataset& data,
                        std::span<const RowIndex> sorted_rows, int feature,
                        const ClassCounts& parent, Criterion criterion,
                        std::vector<SplitCandidate>& out) {
  const std::size_t n = sorted_rows.size();
  if (n < 2) return;
  const std::span<const double> column =
      data.column(static_cast<std::size_t>(feature));
  const int k = parent.num_classes();
  std::vector<std::int64_t> left(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> right(parent.counts().begin(), parent.counts().end());
  const double parent_impurity = Impurity(parent, criterion);
  const double total = static_cast<double>(n);

  double current = column[sorted_rows[0]];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int label = data.label(sorted_rows[i]);
    ++left[static_cast<std::size_t>(label)];
    --right[static_cast<std::size_t>(label)];
    const double next = column[sorted_rows[i + 1]];
    if (next == current) continue;
    const auto n_left = static_cast<std::int64_t>(i + 1);
    const auto n_right = static_cast<std::int64_t>(n) - n_left;
    const double decrease =
        parent_impurity -
        static_cast<double>(n_left) / total * ImpurityOf(left, n_left, criterion) -
        static_cast<double>(n_right) / total * ImpurityOf(right, n_right, criterion);
    out.push_back(SplitCandidate{feature, SplitThreshold(current, next),
                                 Clamp(decrease), n_left});
    current = next;
  }
}

std::vector<SplitCandidate> CandidateSplits(const Dataset& data,
                                            std::span<const RowIndex> rows,
                                            int feature, Criterion criterion) {
  std::vector<SplitCandidate> out;
  if (rows.size() < 2) return out;
  std::vector<RowIndex> sorted(rows.begin(), rows.end());
  const std::span<const double> column =
      data.column(static_cast<std::size_t>(feature));
  std::stable_sort(sorted.begin(), sorted.end(), [&](RowIndex a, RowIndex b) {
    return column[a] < column[b];
  });
  SweepSortedFeature(data, sorted, feature, CountLabels(data, sorted),
                     criterion, out);
  return out;
}

ClassCounts CountLabels(const Dataset& data, std::span<const RowIndex> rows) {
  ClassCounts counts(data.num_classes());
  for (RowIndex r : rows) counts.Add(data.label(r));
  return counts;
}

}  // namespace mrf
