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

// Acceptance checks, one per criterion. Usage:
//   acceptance_test [--criterion N]
// Prints one PASS / FAIL / SKIP line per criterion. Exit status is 0 when
// every selected criterion passes, 77 when none failed but some could not
// run (missing inputs), 1 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "boost/math/distributions/chi_squared.hpp"
#include "invariants.h"
#include "mrf/dataset.h"
#include "mrf/forest.h"
#include "mrf/harness.h"
#include "mrf/impurity.h"
#include "mrf/privacy.h"
#include "mrf/split_selection.h"
#include "test_util.h"

namespace mrf::acceptance {
namespace {

using testing::Iota;

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome = Outcome::kFail;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string Fixed(double value, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << value;
  return out.str();
}

// ---------------------------------------------------------------------------
// Benchmark reproduction with default hyper-parameters.

std::string UciDir() {
  if (const char* dir = std::getenv("MRF_UCI_DATA_DIR")) return dir;
  return std::string(MRF_TEST_DATA_DIR) + "/uci";
}

Verdict UciReproduction() {
  struct Target {
    const char* file;
    double accuracy;
  };
  const Target targets[] = {
      {"banknote.csv", 99.49}, {"transfusion.csv", 78.53}, {"car.csv", 96.30}, {"cmc.csv", 56.12}};
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool failed = false;
  std::vector<std::string> missing;
  for (const Target& t : targets) {
    const std::string path = UciDir() + "/" + t.file;
    if (!std::filesystem::exists(path)) {
      missing.push_back(t.file);
      std::printf("  %-16s missing (%s)\n", t.file, path.c_str());
      continue;
    }
    const Dataset data = LoadCsvFile(path);
    MethodConfig config;
    CvOptions options;  // 10 x 10 folds, defaults throughout
    const CvReport report = RunCv(data, t.file, config, options);
    const double pct = 100.0 * report.mean_accuracy;
    const bool ok = std::abs(pct - t.accuracy) <= 2.0;
    failed = failed || !ok;
    std::printf("  %-16s n=%zu mean=%.2f%% target=%.2f%% |diff|=%.2fpp %s\n", t.file,
                data.num_rows(), pct, t.accuracy, std::abs(pct - t.accuracy),
                ok ? "ok" : "OUT OF TOLERANCE");
  }
  const double elapsed = Seconds(start);
  if (elapsed > 15 * 60) failed = true;
  detail << "elapsed " << Fixed(elapsed, 1) << "s (limit 900s)";
  if (failed) return {Outcome::kFail, detail.str()};
  if (!missing.empty()) {
    detail << "; not verified, CSV not present in " << UciDir() << ":";
    for (const std::string& m : missing) detail << " " << m;
    return {Outcome::kSkip, detail.str()};
  }
  return {Outcome::kPass, detail.str()};
}

// ---------------------------------------------------------------------------
// Greedy limit against a brute-force CART oracle.

struct OracleNode {
  int feature = -1;
  double threshold = 0.0;
  std::unique_ptr<OracleNode> left;
  std::unique_ptr<OracleNode> right;
  std::vector<std::int64_t> counts;
};

struct OracleResult {
  std::unique_ptr<OracleNode> root;
  bool near_tie = false;
};

constexpr double kTieMargin = 1e-9;

double Gini(const std::vector<double>& counts) {
  double n = 0;
  for (double c : counts) n += c;
  double g = 1;
  for (double c : counts) g -= (c / n) * (c / n);
  return g;
}

// Exhaustive split search by direct counting; no shared code with the
// library beyond reading the dataset.
std::unique_ptr<OracleNode> BuildOracle(const Dataset& data, const std::vector<RowIndex>& s,
                                        const std::vector<RowIndex>& e, int k, bool& near_tie) {
  auto node = std::make_unique<OracleNode>();
  node->counts.assign(static_cast<std::size_t>(data.num_classes()), 0);
  for (RowIndex r : e) ++node->counts[static_cast<std::size_t>(data.label(r))];
  if (static_cast<int>(e.size()) <= k) return node;

  const int kc = data.num_classes();
  std::vector<double> parent(static_cast<std::size_t>(kc), 0);
  for (RowIndex r : s) parent[static_cast<std::size_t>(data.label(r))] += 1;
  const double n = static_cast<double>(s.size());

  struct Best {
    double gain = -1;
    double threshold = 0;
    double runner_up = -1;
  };
  std::vector<Best> best(data.num_features());
  std::vector<int> splittable;
  for (std::size_t f = 0; f < data.num_features(); ++f) {
    std::vector<double> values;
    for (RowIndex r : s) values.push_back(data.value(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() < 2) continue;
    splittable.push_back(static_cast<int>(f));
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const double t = values[i] + (values[i + 1] - values[i]) / 2;
      std::vector<double> l(static_cast<std::size_t>(kc), 0);
      std::vector<double> rr(static_cast<std::size_t>(kc), 0);
      for (RowIndex r : s) {
        (data.value(r, f) <= t ? l : rr)[static_cast<std::size_t>(data.label(r))] += 1;
      }
      double nl = 0;
      for (double c : l) nl += c;
      const double gain = Gini(parent) - nl / n * Gini(l) - (n - nl) / n * Gini(rr);
      Best& b = best[f];
      if (gain > b.gain) {
        b.runner_up = b.gain;
        b.gain = gain;
        b.threshold = t;
      } else if (gain > b.runner_up) {
        b.runner_up = gain;
      }
    }
  }
  if (splittable.empty()) return node;

  int chosen = -1;
  double top = -1;
  double second = -1;
  for (int f : splittable) {
    const double g = best[static_cast<std::size_t>(f)].gain;
    if (g > top) {
      second = top;
      top = g;
      chosen = f;
    } else if (g > second) {
      second = g;
    }
  }
  const Best& b = best[static_cast<std::size_t>(chosen)];
  if (top - second <= kTieMargin || b.gain - b.runner_up <= kTieMargin) {
    near_tie = true;
    return node;
  }

  std::vector<RowIndex> sl, sr, el, er;
  for (RowIndex r : s) (data.value(r, chosen) <= b.threshold ? sl : sr).push_back(r);
  for (RowIndex r : e) (data.value(r, chosen) <= b.threshold ? el : er).push_back(r);
  // The greedy draw is the same on every attempt, so an invalid best split
  // makes a leaf.
  if (static_cast<int>(el.size()) < k || static_cast<int>(er.size()) < k) return node;
  node->feature = chosen;
  node->threshold = b.threshold;
  node->left = BuildOracle(data, sl, el, k, near_tie);
  node->right = BuildOracle(data, sr, er, k, near_tie);
  return node;
}

bool SameTree(const Tree& tree, const TreeNode& node, const OracleNode& oracle,
              std::string& why) {
  if (node.feature != oracle.feature) {
    why = "feature " + std::to_string(node.feature) + " vs " + std::to_string(oracle.feature);
    return false;
  }
  if (!node.is_leaf() && node.threshold != oracle.threshold) {
    why = "threshold mismatch";
    return false;
  }
  if (std::vector<std::int64_t>(node.counts.counts().begin(), node.counts.counts().end()) !=
      oracle.counts) {
    why = "estimation counts mismatch";
    return false;
  }
  if (node.is_leaf()) return true;
  return SameTree(tree, tree.nodes()[static_cast<std::size_t>(node.left)], *oracle.left, why) &&
         SameTree(tree, tree.nodes()[static_cast<std::size_t>(node.right)], *oracle.right, why);
}

// Labels follow a blend of the first and last feature with 30% label noise,
// which gives trees several levels deep.
Dataset BlockDataset(Rng& rng, std::size_t n, std::size_t d, int classes) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : rows[i]) v = rng.Uniform01();
    const double blend = 0.6 * rows[i][0] + 0.4 * rows[i][d - 1];
    labels[i] = rng.Uniform01() < 0.3
                    ? static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(classes)))
                    : std::min(classes - 1, static_cast<int>(blend * classes * 1.7) % classes);
  }
  return testing::MakeDataset(rows, labels, classes);
}

Verdict GreedyLimitEquivalence() {
  int accepted = 0;
  int rejected = 0;
  int mismatches = 0;
  std::string first_mismatch;
  std::size_t total_nodes = 0;
  for (std::uint64_t attempt = 0; accepted < 50 && attempt < 5000; ++attempt) {
    Rng rng(DeriveSeed(2024, attempt));
    const std::size_t n = 128 + rng.UniformInt(129);
    const std::size_t d = 1 + rng.UniformInt(6);
    const int classes = 2 + static_cast<int>(rng.UniformInt(2));
    const Dataset data = BlockDataset(rng, n, d, classes);
    MrfConfig config;
    config.num_trees = 1;
    config.b1 = config.b2 = config.b3 = Concentration::Infinite();
    config.min_leaf = 6 + static_cast<int>(rng.UniformInt(10));
    config.seed = rng.NextU64();
    config.num_threads = 1;
    if (n < 2 * static_cast<std::size_t>(config.min_leaf)) continue;

    // Same structure/estimation split the forest draws for tree 0.
    Rng tree_rng = Rng::ForStream(config.seed, 0);
    const Partition p = PartitionRows(Iota(n), config.partition_rate, tree_rng);
    bool near_tie = false;
    const auto oracle = BuildOracle(data, p.structure, p.estimation, config.min_leaf, near_tie);
    if (near_tie) {
      ++rejected;
      continue;
    }
    ++accepted;
    const Forest forest = TrainMrf(data, config);
    const Tree& tree = forest.trees()[0];
    total_nodes += tree.nodes().size();
    std::string why;
    if (!SameTree(tree, tree.root(), *oracle, why)) {
      ++mismatches;
      if (first_mismatch.empty()) first_mismatch = "dataset " + std::to_string(attempt) + ": " + why;
    }
  }
  std::ostringstream detail;
  detail << accepted << " datasets compared (" << rejected << " rejected for near-ties), "
         << total_nodes << " nodes, " << mismatches << " mismatches";
  if (!first_mismatch.empty()) detail << "; first: " << first_mismatch;
  return {accepted == 50 && mismatches == 0 ? Outcome::kPass : Outcome::kFail, detail.str()};
}

// ---------------------------------------------------------------------------
// Completely random limit: root feature frequencies.

Verdict CompletelyRandomLimit() {
  Rng rng(31);
  const std::size_t d = 5;
  const Dataset data = testing::RandomDataset(rng, 200, d, 2, 0, true);
  MrfConfig config;
  config.b1 = Concentration(0.0);
  config.b2 = Concentration(0.0);
  config.num_trees = 10000;
  config.max_depth = 1;
  config.min_leaf = 1;
  config.seed = 32;
  const Forest forest = TrainMrf(data, config);
  std::vector<double> hits(d, 0);
  double total = 0;
  for (const Tree& tree : forest.trees()) {
    if (tree.root().is_leaf()) continue;
    hits[static_cast<std::size_t>(tree.root().feature)] += 1;
    total += 1;
  }
  double stat = 0;
  for (double h : hits) stat += (h - total / d) * (h - total / d) / (total / d);
  boost::math::chi_squared dist(static_cast<double>(d - 1));
  const double p = boost::math::cdf(boost::math::complement(dist, stat));
  std::ostringstream detail;
  detail << total << " root selections over " << d << " features, counts [";
  for (std::size_t j = 0; j < d; ++j) detail << (j ? " " : "") << hits[j];
  detail << "], chi2=" << Fixed(stat, 3) << " p=" << Fixed(p, 4) << " (need > 0.001)";
  return {total >= 10000 * 0.99 && p > 0.001 ? Outcome::kPass : Outcome::kFail, detail.str()};
}

// ---------------------------------------------------------------------------
// Feature-selection probability bounds.

Verdict FeatureBounds() {
  const int draws = 100000;
  int checks = 0;
  int violations = 0;
  std::string first;
  Rng rng(41);
  for (int d : {2, 3, 8}) {
    // Fixed score vectors: one-hot, evenly spread, random, and all-equal.
    std::vector<std::vector<double>> vectors;
    std::vector<double> onehot(static_cast<std::size_t>(d), 0.0);
    onehot[0] = 0.3;
    vectors.push_back(onehot);
    std::vector<double> spread(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) spread[static_cast<std::size_t>(j)] = 0.05 * j;
    vectors.push_back(spread);
    std::vector<double> random(static_cast<std::size_t>(d));
    for (double& v : random) v = rng.Uniform01() * 0.5;
    vectors.push_back(random);
    vectors.push_back(std::vector<double>(static_cast<std::size_t>(d), 0.2));
    for (double b1 : {0.0, 1.0, 10.0}) {
      const auto [lower, upper] = FeatureProbabilityBounds(d, b1);
      for (const auto& scores : vectors) {
        std::vector<double> hits(static_cast<std::size_t>(d), 0);
        for (int i = 0; i < draws; ++i) ++hits[SelectFeature(scores, Concentration(b1), rng)];
        for (int j = 0; j < d; ++j) {
          const double f = hits[static_cast<std::size_t>(j)] / draws;
          const double lo = lower - 3 * std::sqrt(lower * (1 - lower) / draws);
          const double hi = upper + 3 * std::sqrt(upper * (1 - upper) / draws);
          ++checks;
          if (f < lo || f > hi) {
            ++violations;
            if (first.empty()) {
              first = "D=" + std::to_string(d) + " B1=" + Fixed(b1, 1) + " feature " +
                      std::to_string(j) + " freq " + Fixed(f, 5) + " outside [" +
                      Fixed(lo, 5) + ", " + Fixed(hi, 5) + "]";
            }
          }
        }
      }
    }
  }
  std::ostringstream detail;
  detail << checks << " feature frequencies from " << draws << " draws each, " << violations
         << " outside the 3-sigma bounds";
  if (!first.empty()) detail << "; first: " << first;
  return {violations == 0 ? Outcome::kPass : Outcome::kFail, detail.str()};
}

// ---------------------------------------------------------------------------
// Exhaustive privacy audits on fuzzed micro datasets.

Verdict PrivacyAudits() {
  const double budgets[] = {0.0, 0.1, 1.0, 5.0};
  int audits = 0;
  int failures = 0;
  double slowest = 0;
  double worst_margin = 0;  // max worst_ratio / e^B
  std::int64_t changes = 0;
  std::string first;
  Rng rng(51);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng.UniformInt(11);
    const std::size_t d = 1 + rng.UniformInt(3);
    const int k = 2 + static_cast<int>(rng.UniformInt(2));
    const int levels = rng.UniformInt(2) == 0 ? 0 : 2 + static_cast<int>(rng.UniformInt(4));
    const Dataset micro = testing::RandomDataset(rng, n, d, k, levels);
    const ClassCounts leaf = CountLabels(micro, Iota(n));
    for (double b : budgets) {
      std::vector<std::function<AuditReport()>> runs;
      runs.push_back([&] { return AuditFeatureMechanism(micro, b); });
      for (int f = 0; f < static_cast<int>(d); ++f) {
        runs.push_back([&, f] { return AuditValueMechanism(micro, f, b); });
      }
      runs.push_back([&] { return AuditLabelMechanism(leaf, b); });
      for (const auto& run : runs) {
        const auto start = std::chrono::steady_clock::now();
        const AuditReport report = run();
        const double elapsed = Seconds(start);
        slowest = std::max(slowest, elapsed);
        ++audits;
        changes += report.candidate_set_changes;
        worst_margin = std::max(worst_margin, report.worst_ratio / std::exp(b));
        const bool ok = report.worst_ratio <= std::exp(b) * (1 + 1e-9) && report.pass &&
                        elapsed < 1.0;
        if (!ok) {
          ++failures;
          if (first.empty()) first = AuditReportToJson(report);
        }
      }
    }
  }
  std::ostringstream detail;
  detail << audits << " audits on 1000 micro datasets, " << failures
         << " failures, max worst_ratio/e^B=" << Fixed(worst_margin, 6) << ", slowest "
         << Fixed(slowest * 1000, 1) << "ms, " << changes
         << " neighbors changed the candidate set";
  if (!first.empty()) detail << "; first failure: " << first;
  return {failures == 0 ? Outcome::kPass : Outcome::kFail, detail.str()};
}

// ---------------------------------------------------------------------------
// Budget allocation and composition.

Verdict BudgetRoundTrip() {
  Rng rng(61);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double epsilon = 0.01 + rng.Uniform01() * 50;
    const int trees = 1 + static_cast<int>(rng.UniformInt(500));
    const auto estimation = static_cast<std::int64_t>(1 + rng.UniformInt(100000));
    const int k = 1 + static_cast<int>(rng.UniformInt(50));
    const double share = 0.05 + rng.Uniform01() * 0.9;
    const PrivacyBudget b = AllocateBudget(epsilon, trees, estimation, k, share);
    worst = std::max(worst, std::abs(ComposeBudget(b.b1 + b.b2, b.depth, b.b3, trees) - epsilon));
  }
  bool table_ok = true;
  std::ostringstream rows;
  const std::pair<double, double> table[] = {{1, 0.05}, {5, 0.25}, {10, 0.5}, {20, 1}};
  for (const auto& [b3, b] : table) {
    const PrivacyBudget budget = AllocateBudgetForDepth(b3, 1, 10, 0.5);
    const bool ok = budget.b3 == b3 && budget.b1 == b && budget.b2 == b &&
                    ComposeBudget(budget.b1 + budget.b2, 10, budget.b3, 1) == b3;
    table_ok = table_ok && ok;
    rows << " (B3=" << budget.b3 << ", B1=" << budget.b1 << ", B2=" << budget.b2 << ")";
  }
  std::ostringstream detail;
  detail << "max |compose(allocate(eps)) - eps| over 100 tuples = " << worst
         << " (limit 1e-9); d=10 rows:" << rows.str();
  return {worst <= 1e-9 && table_ok ? Outcome::kPass : Outcome::kFail, detail.str()};
}

// ---------------------------------------------------------------------------
// Error decreases with sample size on a known-risk problem.

constexpr std::size_t kConsistencyDims = 2;

// Classes N(+-m, I) in `d` dimensions with m along the diagonal and
// |m| = mu, so the Bayes error is Phi(-mu) and the boundary is oblique.
Dataset DiagonalGaussians(std::size_t n, std::size_t d, double mu, Rng& rng) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  std::vector<int> labels(n);
  const double shift = mu / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(rng.UniformInt(2));
    for (double& v : rows[i]) {
      const double u1 = 1.0 - rng.Uniform01();
      const double u2 = rng.Uniform01();
      v = std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2) +
          (labels[i] == 1 ? shift : -shift);
    }
  }
  return testing::MakeDataset(rows, labels, 2);
}

Verdict ConsistencyTrend() {
  // mu = Phi^{-1}(0.9) gives Bayes error 10%.
  const double mu = 1.28155;
  const std::size_t dims = kConsistencyDims;
  const std::size_t test_size = 20000;
  double error_small = 0;
  double error_large = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng test_rng(DeriveSeed(71, seed));
    const Dataset test = DiagonalGaussians(test_size, dims, mu, test_rng);
    for (std::size_t n : {std::size_t{512}, std::size_t{16384}}) {
      Rng rng(DeriveSeed(72 + n, seed));
      const Dataset train = DiagonalGaussians(n, dims, mu, rng);
      MrfConfig config;
      config.min_leaf = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
      config.seed = seed;
      const Forest forest = TrainMrf(train, config);
      const BatchPrediction p = PredictBatch(forest, test, Iota(test_size), seed);
      double wrong = 0;
      for (std::size_t r = 0; r < test_size; ++r) wrong += p.classes[r] != test.label(r);
      (n == 512 ? error_small : error_large) += wrong / test_size / 10;
    }
  }
  std::ostringstream detail;
  detail << "D=" << dims << ", mean test error n=512: " << Fixed(100 * error_small, 2) << "%, n=16384: "
         << Fixed(100 * error_large, 2) << "% (Bayes 10%), improvement "
         << Fixed(100 * (error_small - error_large), 2) << "pp (need >= 1pp)";
  return {error_small - error_large >= 0.01 ? Outcome::kPass : Outcome::kFail, detail.str()};
}

// ---------------------------------------------------------------------------
// Structural invariants.

Verdict StructuralInvariants() {
  const std::pair<const char*, testing::Violation (*)(std::uint64_t)> checks[] = {
      {"leaf occupancy", testing::CheckLeafOccupancy},
      {"vote conservation", testing::CheckVoteConservation},
      {"partition disjointness", testing::CheckPartitionDisjointness},
      {"determinism", testing::CheckDeterminism},
      {"serialization round trip", testing::CheckSerializationRoundTrip},
  };
  std::ostringstream detail;
  bool ok = true;
  std::uint64_t salt = 81;
  for (const auto& [name, check] : checks) {
    int failed = 0;
    std::string first;
    for (int i = 0; i < testing::kPropertyCases; ++i) {
      const auto v = check(DeriveSeed(salt, static_cast<std::uint64_t>(i)));
      if (v) {
        ++failed;
        if (first.empty()) first = *v;
      }
    }
    ++salt;
    ok = ok && failed == 0;
    detail << name << " " << testing::kPropertyCases - failed << "/" << testing::kPropertyCases;
    if (!first.empty()) detail << " (" << first << ")";
    detail << "; ";
  }
  return {ok ? Outcome::kPass : Outcome::kFail, detail.str()};
}

// ---------------------------------------------------------------------------
// Split-value concentration helps on Cmc.

Verdict ValueConcentrationTrend() {
  const std::string path = std::string(MRF_TEST_DATA_DIR) + "/uci/cmc.csv";
  if (!std::filesystem::exists(path)) return {Outcome::kSkip, path + " not present"};
  const Dataset data = LoadCsvFile(path);
  MrfConfig base;
  CvOptions options;
  options.folds = 5;
  options.repeats = 5;
  options.seed = 91;
  const SweepReport report = Sweep(data, "cmc", {0.0}, {0.0, 10.0}, base, options);
  const double flat = report.at(0, 0).mean_accuracy;
  const double peaked = report.at(0, 1).mean_accuracy;
  std::ostringstream detail;
  detail << "Cmc 5x5 CV mean accuracy at (B1=0, B2=0): " << Fixed(100 * flat, 2)
         << "%, at (B1=0, B2=10): " << Fixed(100 * peaked, 2) << "%";
  return {peaked > flat ? Outcome::kPass : Outcome::kFail, detail.str()};
}

struct Criterion {
  int id;
  const char* name;
  Verdict (*run)();
};

const Criterion kCriteria[] = {
    {1, "benchmark reproduction within 2pp", UciReproduction},
    {2, "greedy limit equals brute-force CART", GreedyLimitEquivalence},
    {3, "completely random limit is uniform over features", CompletelyRandomLimit},
    {4, "feature selection frequency bounds", FeatureBounds},
    {5, "exhaustive privacy audits", PrivacyAudits},
    {6, "budget allocation round trip", BudgetRoundTrip},
    {7, "error decreases with sample size", ConsistencyTrend},
    {8, "structural invariants", StructuralInvariants},
    {9, "split value concentration improves Cmc accuracy", ValueConcentrationTrend},
};

int Main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  bool any_fail = false;
  bool any_skip = false;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::kPass ? "PASS" : v.outcome == Outcome::kSkip ? "SKIP" : "FAIL";
    std::printf("[%s] criterion %d: %s (%.1fs) -- %s\n", tag, c.id, c.name, Seconds(start),
                v.detail.c_str());
    std::fflush(stdout);
    any_fail = any_fail || v.outcome == Outcome::kFail;
    any_skip = any_skip || v.outcome == Outcome::kSkip;
  }
  if (any_fail) return 1;
  return any_skip ? 77 : 0;
}

}  // namespace
}  // namespace mrf::acceptance

int main(int argc, char** argv) { return mrf::acceptance::Main(argc, argv); }
