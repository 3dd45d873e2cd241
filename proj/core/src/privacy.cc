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

#include "mrf/privacy.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json_io.h"
#include "mrf/error.h"
#include "mrf/split_selection.h"

namespace mrf {
namespace {

constexpr double kRatioSlack = 1e-9;

struct Record {
  std::vector<double> x;
  int y = 0;
};

using Records = std::vector<Record>;

Records ToRecords(const Dataset& data) {
  Records records(data.num_rows());
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    records[i].x.assign(data.row(i).begin(), data.row(i).end());
    records[i].y = data.label(i);
  }
  return records;
}

ClassCounts Tally(const Records& records, int num_classes) {
  ClassCounts counts(num_classes);
  for (const Record& r : records) counts.Add(r.y);
  return counts;
}

// Decrease of splitting `records` at `threshold` on `feature`; 0 when a
// child would be empty.
double DecreaseAt(const Records& records, int num_classes, int feature,
                  double threshold, Criterion criterion) {
  ClassCounts left(num_classes);
  ClassCounts right(num_classes);
  for (const Record& r : records) {
    (r.x[static_cast<std::size_t>(feature)] <= threshold ? left : right).Add(r.y);
  }
  if (left.total() == 0 || right.total() == 0) return 0.0;
  ClassCounts parent(num_classes);
  for (const Record& r : records) parent.Add(r.y);
  return ImpurityDecrease(parent, left, right, criterion);
}

// Data-dependent thresholds: midpoints of adjacent distinct values.
std::vector<double> DataThresholds(const Records& records, int feature) {
  std::vector<double> values;
  for (const Record& r : records) values.push_back(r.x[static_cast<std::size_t>(feature)]);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> thresholds;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    thresholds.push_back(SplitThreshold(values[i], values[i + 1]));
  }
  return thresholds;
}

// Per-feature best decrease over the data's own candidates, 0 for a
// constant feature. The output space is all D features on every dataset.
std::vector<double> FeatureScores(const Records& records, int num_features,
                                  int num_classes, Criterion criterion,
                                  std::vector<char>& splittable) {
  std::vector<double> scores(static_cast<std::size_t>(num_features), 0.0);
  splittable.assign(static_cast<std::size_t>(num_features), 0);
  for (int j = 0; j < num_features; ++j) {
    for (double t : DataThresholds(records, j)) {
      splittable[static_cast<std::size_t>(j)] = 1;
      scores[static_cast<std::size_t>(j)] =
          std::max(scores[static_cast<std::size_t>(j)],
                   DecreaseAt(records, num_classes, j, t, criterion));
    }
  }
  return scores;
}

struct RatioTracker {
  double worst = 1.0;
  std::string witness = "none";
  std::int64_t neighbors = 0;
  std::int64_t changed = 0;

  void Compare(const std::vector<double>& p, const std::vector<double>& q,
               const std::string& change, const std::vector<std::string>& names) {
    ++neighbors;
    for (std::size_t o = 0; o < p.size(); ++o) {
      const double ratio = std::max(p[o] / q[o], q[o] / p[o]);
      if (ratio > worst) {
        worst = ratio;
        witness = change + " -> output " + names[o];
      }
    }
  }

  AuditReport Finish(const std::string& mechanism, double budget) const {
    AuditReport report;
    report.mechanism = mechanism;
    report.budget = budget;
    report.worst_ratio = worst;
    report.bound = std::exp(budget);
    report.pass = worst <= report.bound * (1.0 + kRatioSlack);
    report.witness = witness;
    report.neighbors_checked = neighbors;
    report.candidate_set_changes = changed;
    return report;
  }
};

std::string Describe(const Record& r) {
  std::ostringstream out;
  out << "(";
  for (std::size_t j = 0; j < r.x.size(); ++j) out << (j ? ", " : "") << r.x[j];
  out << "; label " << r.y << ")";
  return out.str();
}

// Visits every neighbor of `records`: each record replaced by every
// combination of per-feature values and labels, and each record removed.
template <typename Visit>
void ForEachNeighbor(const Records& records, int num_classes,
                     const AuditOptions& options, Visit&& visit) {
  const std::size_t n = records.size();
  const std::size_t d = records.front().x.size();
  std::vector<std::vector<double>> grid(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!options.value_grid.empty()) {
      grid[j] = options.value_grid;
    } else {
      double lo = records[0].x[j];
      double hi = lo;
      for (const Record& r : records) {
        lo = std::min(lo, r.x[j]);
        hi = std::max(hi, r.x[j]);
      }
      grid[j] = {lo - 1.0, lo + (hi - lo) / 2.0, hi + 1.0};
    }
  }

  Records neighbor;
  if (options.replace_one) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<double>> choices(d);
      for (std::size_t j = 0; j < d; ++j) {
        choices[j] = grid[j];
        choices[j].push_back(records[i].x[j]);
        std::sort(choices[j].begin(), choices[j].end());
        choices[j].erase(std::unique(choices[j].begin(), choices[j].end()),
                         choices[j].end());
      }
      std::vector<std::size_t> pick(d, 0);
      while (true) {
        Record replacement;
        replacement.x.resize(d);
        for (std::size_t j = 0; j < d; ++j) replacement.x[j] = choices[j][pick[j]];
        for (int y = 0; y < num_classes; ++y) {
          replacement.y = y;
          if (replacement.y == records[i].y && replacement.x == records[i].x) continue;
          neighbor = records;
          neighbor[i] = replacement;
          visit(neighbor, "replace row " + std::to_string(i) + " with " +
                              Describe(replacement));
        }
        std::size_t j = 0;
        while (j < d && ++pick[j] == choices[j].size()) pick[j++] = 0;
        if (j == d) break;
      }
    }
  }
  if (options.remove_one && n >= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      neighbor = records;
      neighbor.erase(neighbor.begin() + static_cast<std::ptrdiff_t>(i));
      visit(neighbor, "remove row " + std::to_string(i));
    }
  }
}

void CheckAuditSize(const Dataset& micro) {
  if (micro.num_rows() > kMaxAuditRows) {
    Fail(ErrorCode::kSize, "exhaustive audit supports at most " +
                               std::to_string(kMaxAuditRows) + " rows, got " +
                               std::to_string(micro.num_rows()));
  }
}

void CheckBudget(double b) {
  if (!(b >= 0.0) || !std::isfinite(b)) {
    Fail(ErrorCode::kDomain, "audit budget must be finite and >= 0");
  }
}

}  // namespace

PrivacyBudget AllocateBudgetForDepth(double epsilon, int num_trees, int depth,
                                     double b1_share) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon) || num_trees < 1 || depth < 1) {
    Fail(ErrorCode::kDomain, "epsilon, tree count and depth must be positive");
  }
  if (!(b1_share > 0.0 && b1_share < 1.0)) {
    Fail(ErrorCode::kDomain, "B1 share must lie in (0, 1)");
  }
  PrivacyBudget budget;
  budget.epsilon = epsilon;
  budget.num_trees = num_trees;
  budget.depth = depth;
  const double per_layer = epsilon / (static_cast<double>(depth) * num_trees);
  budget.b1 = b1_share * per_layer;
  budget.b2 = (1.0 - b1_share) * per_layer;
  budget.b3 = epsilon / num_trees;
  return budget;
}

PrivacyBudget AllocateBudget(double epsilon, int num_trees,
                             std::int64_t estimation_size, int min_leaf,
                             double b1_share) {
  if (estimation_size < 1 || min_leaf < 1) {
    Fail(ErrorCode::kDomain, "estimation size and min_leaf must be positive");
  }
  const auto depth = static_cast<int>((estimation_size + min_leaf - 1) / min_leaf);
  return AllocateBudgetForDepth(epsilon, num_trees, depth, b1_share);
}

double ComposeBudget(double per_layer, int depth, double b3, int num_trees) {
  if (per_layer < 0.0 || depth < 0 || b3 < 0.0 || num_trees < 0) {
    Fail(ErrorCode::kDomain, "budget components must be nonnegative");
  }
  return num_trees * std::max(depth * per_layer, b3);
}

AuditReport AuditFeatureMechanism(const Dataset& micro, double b1,
                                  const AuditOptions& options) {
  CheckAuditSize(micro);
  CheckBudget(b1);
  const Concentration scale(b1);
  const int d = static_cast<int>(micro.num_features());
  const int k = micro.num_classes();
  const Records records = ToRecords(micro);
  std::vector<char> base_splittable;
  const std::vector<double> base = SelectionProbabilities(
      FeatureScores(records, d, k, options.criterion, base_splittable), scale);

  std::vector<std::string> names;
  for (int j = 0; j < d; ++j) names.push_back("feature " + std::to_string(j));
  RatioTracker tracker;
  std::vector<char> splittable;
  ForEachNeighbor(records, k, options, [&](const Records& neighbor,
                                           const std::string& change) {
    const std::vector<double> p = SelectionProbabilities(
        FeatureScores(neighbor, d, k, options.criterion, splittable), scale);
    if (splittable != base_splittable) ++tracker.changed;
    tracker.Compare(base, p, change, names);
  });
  return tracker.Finish("split_feature", b1);
}

AuditReport AuditValueMechanism(const Dataset& micro, int feature, double b2,
                                const AuditOptions& options) {
  CheckAuditSize(micro);
  CheckBudget(b2);
  if (feature < 0 || static_cast<std::size_t>(feature) >= micro.num_features()) {
    Fail(ErrorCode::kDomain, "feature index out of range");
  }
  const Concentration scale(b2);
  const int k = micro.num_classes();
  const Records records = ToRecords(micro);

  // Shared threshold grid: midpoints over observed and grid values.
  std::vector<double> values(micro.column(static_cast<std::size_t>(feature)).begin(),
                             micro.column(static_cast<std::size_t>(feature)).end());
  if (options.value_grid.empty()) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double min = *lo;
    const double max = *hi;
    values.insert(values.end(), {min - 1.0, min + (max - min) / 2.0, max + 1.0});
  } else {
    values.insert(values.end(), options.value_grid.begin(), options.value_grid.end());
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> thresholds;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    thresholds.push_back(SplitThreshold(values[i], values[i + 1]));
  }
  std::vector<std::string> names;
  for (double t : thresholds) {
    std::ostringstream s;
    s << "threshold " << t;
    names.push_back(s.str());
  }

  auto probabilities = [&](const Records& data) {
    std::vector<double> decreases;
    decreases.reserve(thresholds.size());
    for (double t : thresholds) {
      decreases.push_back(DecreaseAt(data, k, feature, t, options.criterion));
    }
    return SelectionProbabilities(decreases, scale);
  };

  const std::vector<double> base = probabilities(records);
  const std::vector<double> base_candidates = DataThresholds(records, feature);
  RatioTracker tracker;
  ForEachNeighbor(records, k, options, [&](const Records& neighbor,
                                           const std::string& change) {
    if (DataThresholds(neighbor, feature) != base_candidates) ++tracker.changed;
    tracker.Compare(base, probabilities(neighbor), change, names);
  });
  return tracker.Finish("split_value", b2);
}

AuditReport AuditLabelMechanism(const ClassCounts& leaf_counts, double b3) {
  CheckBudget(b3);
  if (leaf_counts.total() < 1) Fail(ErrorCode::kDomain, "empty leaf");
  const Concentration scale(b3);
  const int k = leaf_counts.num_classes();
  std::vector<std::string> names;
  for (int c = 0; c < k; ++c) names.push_back("class " + std::to_string(c));

  auto probabilities = [&](const std::vector<std::int64_t>& counts) {
    const ClassCounts tally(counts);
    const std::vector<double> eta = LeafDistribution(tally, {});
    return SoftmaxScaled(eta, scale);
  };
  const std::vector<std::int64_t> base_counts(leaf_counts.counts().begin(),
                                              leaf_counts.counts().end());
  const std::vector<double> base = probabilities(base_counts);

  RatioTracker tracker;
  for (int from = 0; from < k; ++from) {
    if (base_counts[static_cast<std::size_t>(from)] == 0) continue;
    for (int to = 0; to < k; ++to) {
      if (to == from) continue;
      std::vector<std::int64_t> changed = base_counts;
      --changed[static_cast<std::size_t>(from)];
      ++changed[static_cast<std::size_t>(to)];
      tracker.Compare(base, probabilities(changed),
                      "relabel one record " + std::to_string(from) + " -> " +
                          std::to_string(to),
                      names);
    }
    if (leaf_counts.total() >= 2) {
      std::vector<std::int64_t> removed = base_counts;
      --removed[static_cast<std::size_t>(from)];
      tracker.Compare(base, probabilities(removed),
                      "remove one record of class " + std::to_string(from), names);
    }
  }
  for (int to = 0; to < k; ++to) {
    std::vector<std::int64_t> added = base_counts;
    ++added[static_cast<std::size_t>(to)];
    tracker.Compare(base, probabilities(added),
                    "add one record of class " + std::to_string(to), names);
  }
  return tracker.Finish("leaf_label", b3);
}

std::string AuditReportToJson(const AuditReport& report) {
  internal::OrderedJson doc;
  doc["mechanism"] = report.mechanism;
  doc["budget"] = report.budget;
  doc["worst_ratio"] = report.worst_ratio;
  doc["bound"] = report.bound;
  doc["pass"] = report.pass;
  doc["witness"] = report.witness;
  doc["neighbors_checked"] = report.neighbors_checked;
  doc["candidate_set_changes"] = report.candidate_set_changes;
  return doc.dump(2);
}

}  // namespace mrf
