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

#ifndef MRF_HARNESS_H_
#define MRF_HARNESS_H_

#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrf/dataset.h"
#include "mrf/forest.h"

namespace mrf {

// Forest family and the settings used to train each fold's forest. Only the
// config matching `method` is read; kCompletelyRandom uses `mrf` with
// B1 = B2 = 0.
struct MethodConfig {
  ForestVariant method = ForestVariant::kMrf;
  MrfConfig mrf;
  BaselineConfig baseline;
};

struct CvOptions {
  int folds = 10;
  int repeats = 10;
  std::uint64_t seed = 0;
  // Concurrent folds; 0 uses the hardware concurrency.
  int num_threads = 0;
};

struct FoldResult {
  int repeat = 0;
  int fold = 0;
  std::size_t test_size = 0;
  double accuracy = 0.0;
  double seconds = 0.0;

  bool operator==(const FoldResult&) const = default;
};

struct CvReport {
  std::string dataset;
  ForestVariant method = ForestVariant::kMrf;
  int folds = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> results;
  double mean_accuracy = 0.0;
  // Sample standard deviation of the fold accuracies.
  double std_accuracy = 0.0;

  std::vector<double> accuracies() const;
  bool operator==(const CvReport&) const = default;
};

// Trains one forest per (repeat, fold) and scores it on the held-out fold.
// The fold plan depends only on (n, folds, repeats, seed), so methods run
// at the same seed are paired.
CvReport RunCv(const Dataset& data, std::string_view name,
               const MethodConfig& config, const CvOptions& options);

// Seed of the forest trained for fold `cell` (= repeat * folds + fold).
std::uint64_t CellSeed(std::uint64_t seed, int cell);
// Seed used to evaluate randomized leaf predictions for fold `cell`.
std::uint64_t EvaluationSeed(std::uint64_t seed, int cell);

double Accuracy(std::span<const int> predicted, const Dataset& data,
                std::span<const RowIndex> rows);

struct WilcoxonResult {
  int num_pairs = 0;  // after dropping zero differences
  double w_plus = 0.0;
  double w_minus = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  bool exact = false;
};

inline constexpr int kMinWilcoxonPairs = 6;
inline constexpr int kMaxExactWilcoxonPairs = 15;
// Differences with magnitude at most this are treated as zero, and ranks
// closer than this are tied.
inline constexpr double kWilcoxonTolerance = 1e-12;

// Two-sided paired signed-rank test. Exact permutation distribution for up
// to kMaxExactWilcoxonPairs nonzero pairs, otherwise normal approximation
// with tie and continuity corrections.
WilcoxonResult WilcoxonSignedRank(std::span<const double> a,
                                  std::span<const double> b);

struct SweepCell {
  double b1 = 0.0;
  double b2 = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;

  bool operator==(const SweepCell&) const = default;
};

struct SweepReport {
  std::string dataset;
  MrfConfig base;
  int folds = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
  std::vector<double> b1_grid;
  std::vector<double> b2_grid;
  // Row-major over (b1, b2).
  std::vector<SweepCell> cells;

  const SweepCell& at(std::size_t i, std::size_t j) const {
    return cells[i * b2_grid.size() + j];
  }
  bool operator==(const SweepReport&) const = default;
};

SweepReport Sweep(const Dataset& data, std::string_view name,
                  const std::vector<double>& b1_grid,
                  const std::vector<double>& b2_grid, const MrfConfig& base,
                  const CvOptions& options);

struct TreeAccuracyReport {
  std::string dataset;
  double forest_accuracy = 0.0;
  std::vector<double> tree_accuracies;

  bool operator==(const TreeAccuracyReport&) const = default;
};

// Accuracy of each tree's vote on `rows`, plus the forest's majority vote.
TreeAccuracyReport TreeAccuracyDistribution(const Forest& forest,
                                            const Dataset& data,
                                            std::span<const RowIndex> rows,
                                            std::uint64_t seed,
                                            std::string_view name = "");

enum class ReportFormat { kJson, kCsv };
ReportFormat ParseReportFormat(std::string_view name);

std::string FormatReport(const CvReport& report, ReportFormat format);
std::string FormatReport(const SweepReport& report, ReportFormat format);
std::string FormatReport(const TreeAccuracyReport& report, ReportFormat format);

// Writes `content` to `path`; "-" means stdout. IoError on failure.
void WriteReport(const std::string& content, const std::string& path);

template <typename Report>
void EmitReport(const Report& report, ReportFormat format,
                const std::string& path) {
  WriteReport(FormatReport(report, format), path);
}

CvReport CvReportFromJson(const std::string& text);
SweepReport SweepReportFromJson(const std::string& text);

// accuracy[method][dataset]
using ScoreTable = std::map<std::string, std::map<std::string, double>>;

// Reads long-format "dataset,method,accuracy" rows.
ScoreTable LoadScoreTable(std::istream& in);

// Mean rank per method over the datasets every method reports; rank 1 is
// the highest accuracy and ties share the average rank.
std::map<std::string, double> AverageRanks(const ScoreTable& table);

}  // namespace mrf

#endif  // MRF_HARNESS_H_
