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

#include "mrf/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "json_io.h"
#include "mrf/error.h"
#include "parallel.h"

namespace mrf {
namespace {

using internal::OrderedJson;

constexpr std::uint64_t kEvaluationStream = 0x6576616c75617465ULL;

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

std::string CsvField(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void Summarize(const std::vector<double>& values, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (values.empty()) return;
  mean = std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
  if (values.size() < 2) return;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
}

Forest TrainMethod(const Dataset& data, std::span<const RowIndex> rows,
                   const MethodConfig& config, std::uint64_t seed) {
  switch (config.method) {
    case ForestVariant::kMrf: {
      MrfConfig mrf = config.mrf;
      mrf.seed = seed;
      return TrainMrf(data, rows, mrf);
    }
    case ForestVariant::kCompletelyRandom: {
      MrfConfig mrf = CompletelyRandomConfig(config.mrf);
      mrf.seed = seed;
      return TrainMrf(data, rows, mrf);
    }
    case ForestVariant::kBreiman: {
      BaselineConfig baseline = config.baseline;
      baseline.seed = seed;
      return TrainBaselineRf(data, rows, baseline);
    }
  }
  Fail(ErrorCode::kConfig, "unknown forest variant");
}

// Average ranks of `values` (1-based), ties within tolerance share ranks.
std::vector<double> MidRanks(const std::vector<double>& values, double tolerance) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] - values[order[j - 1]] <= tolerance) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t m = i; m < j; ++m) ranks[order[m]] = rank;
    i = j;
  }
  return ranks;
}

OrderedJson FoldToJson(const FoldResult& r) {
  OrderedJson j;
  j["repeat"] = r.repeat;
  j["fold"] = r.fold;
  j["test_size"] = r.test_size;
  j["accuracy"] = r.accuracy;
  j["seconds"] = r.seconds;
  return j;
}

OrderedJson CvReportToJsonValue(const CvReport& report) {
  OrderedJson j;
  j["format"] = "mrf-cv-report";
  j["version"] = 1;
  j["dataset"] = report.dataset;
  j["method"] = std::string(VariantName(report.method));
  j["folds"] = report.folds;
  j["repeats"] = report.repeats;
  j["seed"] = report.seed;
  j["mean_accuracy"] = report.mean_accuracy;
  j["std_accuracy"] = report.std_accuracy;
  OrderedJson results = OrderedJson::array();
  for (const FoldResult& r : report.results) results.push_back(FoldToJson(r));
  j["results"] = std::move(results);
  return j;
}

}  // namespace

std::vector<double> CvReport::accuracies() const {
  std::vector<double> out;
  out.reserve(results.size());
  for (const FoldResult& r : results) out.push_back(r.accuracy);
  return out;
}

std::uint64_t CellSeed(std::uint64_t seed, int cell) {
  return DeriveSeed(seed, static_cast<std::uint64_t>(cell));
}

std::uint64_t EvaluationSeed(std::uint64_t seed, int cell) {
  return DeriveSeed(DeriveSeed(seed, kEvaluationStream), static_cast<std::uint64_t>(cell));
}

double Accuracy(std::span<const int> predicted, const Dataset& data,
                std::span<const RowIndex> rows) {
  if (predicted.size() != rows.size()) {
    Fail(ErrorCode::kMismatch, "prediction count does not match row count");
  }
  if (rows.empty()) Fail(ErrorCode::kSize, "accuracy of an empty row set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    correct += predicted[i] == data.label(rows[i]) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

CvReport RunCv(const Dataset& data, std::string_view name,
               const MethodConfig& config, const CvOptions& options) {
  const FoldPlan plan =
      MakeFolds(data.num_rows(), options.folds, options.repeats, options.seed);
  CvReport report;
  report.dataset = std::string(name);
  report.method = config.method;
  report.folds = options.folds;
  report.repeats = options.repeats;
  report.seed = options.seed;
  report.results.resize(plan.assignments.size());

  const int workers = internal::ResolveThreads(options.num_threads, plan.assignments.size());
  MethodConfig cell_config = config;
  if (workers > 1) {
    cell_config.mrf.num_threads = 1;
    cell_config.baseline.num_threads = 1;
  }
  internal::ParallelFor(plan.assignments.size(), workers, [&](std::size_t cell) {
    const auto start = std::chrono::steady_clock::now();
    const FoldAssignment& split = plan.assignments[cell];
    const int id = static_cast<int>(cell);
    const Forest forest = TrainMethod(data, split.train, cell_config, CellSeed(options.seed, id));
    const BatchPrediction prediction =
        PredictBatch(forest, data, split.test, EvaluationSeed(options.seed, id));
    FoldResult& result = report.results[cell];
    result.repeat = id / options.folds;
    result.fold = id % options.folds;
    result.test_size = split.test.size();
    result.accuracy = Accuracy(prediction.classes, data, split.test);
    result.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start).count();
  });
  Summarize(report.accuracies(), report.mean_accuracy, report.std_accuracy);
  return report;
}

WilcoxonResult WilcoxonSignedRank(std::span<const double> a,
                                  std::span<const double> b) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kMismatch, "paired samples differ in length");
  }
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (std::abs(d) > kWilcoxonTolerance) diffs.push_back(d);
  }
  const int n = static_cast<int>(diffs.size());
  if (n < kMinWilcoxonPairs) {
    Fail(ErrorCode::kTooFewPairs, std::to_string(n) + " nonzero differences, need " +
                                      std::to_string(kMinWilcoxonPairs));
  }
  std::vector<double> magnitudes(diffs.size());
  std::transform(diffs.begin(), diffs.end(), magnitudes.begin(),
                 [](double d) { return std::abs(d); });
  const std::vector<double> ranks = MidRanks(magnitudes, kWilcoxonTolerance);

  WilcoxonResult result;
  result.num_pairs = n;
  for (int i = 0; i < n; ++i) {
    (diffs[static_cast<std::size_t>(i)] > 0 ? result.w_plus : result.w_minus) +=
        ranks[static_cast<std::size_t>(i)];
  }
  const double mean = n * (n + 1) / 4.0;
  double variance = n * (n + 1) * (2.0 * n + 1) / 24.0;
  std::map<double, int> ties;
  for (double r : ranks) ++ties[r];
  for (const auto& [rank, count] : ties) {
    const double t = count;
    variance -= (t * t * t - t) / 48.0;
  }
  const double deviation = std::abs(result.w_plus - mean);
  result.z = variance > 0 ? std::max(0.0, deviation - 0.5) / std::sqrt(variance) : 0.0;

  if (n <= kMaxExactWilcoxonPairs) {
    // Distribution of twice the positive rank sum over all sign patterns.
    int total = 0;
    std::vector<int> doubled(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
      total += doubled[i];
    }
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1.0;
    for (int r : doubled) {
      for (int s = total; s >= r; --s) {
        ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];
      }
    }
    const auto observed = static_cast<int>(std::lround(2.0 * result.w_plus));
    const int observed_gap = std::abs(2 * observed - total);
    double extreme = 0.0;
    for (int s = 0; s <= total; ++s) {
      if (std::abs(2 * s - total) >= observed_gap) extreme += ways[static_cast<std::size_t>(s)];
    }
    result.p_value = std::min(1.0, extreme / std::ldexp(1.0, n));
    result.exact = true;
  } else {
    result.p_value = std::min(1.0, std::erfc(result.z / std::sqrt(2.0)));
  }
  return result;
}

SweepReport Sweep(const Dataset& data, std::string_view name,
                  const std::vector<double>& b1_grid,
                  const std::vector<double>& b2_grid, const MrfConfig& base,
                  const CvOptions& options) {
  if (b1_grid.empty() || b2_grid.empty()) {
    Fail(ErrorCode::kConfig, "sweep grids must be nonempty");
  }
  SweepReport report;
  report.dataset = std::string(name);
  report.base = base;
  report.folds = options.folds;
  report.repeats = options.repeats;
  report.seed = options.seed;
  report.b1_grid = b1_grid;
  report.b2_grid = b2_grid;
  for (double b1 : b1_grid) {
    for (double b2 : b2_grid) {
      MethodConfig config;
      config.method = ForestVariant::kMrf;
      config.mrf = base;
      config.mrf.b1 = Concentration(b1);
      config.mrf.b2 = Concentration(b2);
      const CvReport cv = RunCv(data, name, config, options);
      report.cells.push_back({b1, b2, cv.mean_accuracy, cv.std_accuracy});
    }
  }
  return report;
}

TreeAccuracyReport TreeAccuracyDistribution(const Forest& forest,
                                            const Dataset& data,
                                            std::span<const RowIndex> rows,
                                            std::uint64_t seed,
                                            std::string_view name) {
  const BatchPrediction prediction = PredictBatch(forest, data, rows, seed);
  TreeAccuracyReport report;
  report.dataset = std::string(name);
  report.forest_accuracy = Accuracy(prediction.classes, data, rows);
  for (std::size_t t = 0; t < prediction.num_trees; ++t) {
    std::span<const int> votes(prediction.votes.data() + t * prediction.num_rows,
                               prediction.num_rows);
    report.tree_accuracies.push_back(Accuracy(votes, data, rows));
  }
  return report;
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  Fail(ErrorCode::kConfig, "unknown report format '" + std::string(name) + "'");
}

std::string FormatReport(const CvReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return CvReportToJsonValue(report).dump(2) + "\n";
  std::ostringstream out;
  out << "dataset,method,repeat,fold,test_size,accuracy,seconds\n";
  for (const FoldResult& r : report.results) {
    out << CsvField(report.dataset) << ',' << VariantName(report.method) << ','
        << r.repeat << ',' << r.fold << ',' << r.test_size << ','
        << FormatDouble(r.accuracy) << ',' << FormatDouble(r.seconds) << '\n';
  }
  return out.str();
}

std::string FormatReport(const SweepReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    OrderedJson j;
    j["format"] = "mrf-sweep-report";
    j["version"] = 1;
    j["dataset"] = report.dataset;
    j["base"] = internal::MrfConfigToJson(report.base);
    j["folds"] = report.folds;
    j["repeats"] = report.repeats;
    j["seed"] = report.seed;
    j["b1_grid"] = report.b1_grid;
    j["b2_grid"] = report.b2_grid;
    OrderedJson cells = OrderedJson::array();
    for (const SweepCell& c : report.cells) {
      cells.push_back({{"b1", c.b1}, {"b2", c.b2},
                       {"mean_accuracy", c.mean_accuracy},
                       {"std_accuracy", c.std_accuracy}});
    }
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "B1,B2,mean_acc,std\n";
  for (const SweepCell& c : report.cells) {
    out << FormatDouble(c.b1) << ',' << FormatDouble(c.b2) << ','
        << FormatDouble(c.mean_accuracy) << ',' << FormatDouble(c.std_accuracy) << '\n';
  }
  return out.str();
}

std::string FormatReport(const TreeAccuracyReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    OrderedJson j;
    j["format"] = "mrf-tree-accuracy";
    j["version"] = 1;
    j["dataset"] = report.dataset;
    j["forest_accuracy"] = report.forest_accuracy;
    j["tree_accuracies"] = report.tree_accuracies;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "tree,accuracy\n";
  for (std::size_t t = 0; t < report.tree_accuracies.size(); ++t) {
    out << t << ',' << FormatDouble(report.tree_accuracies[t]) << '\n';
  }
  return out.str();
}

void WriteReport(const std::string& content, const std::string& path) {
  if (path == "-") {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) Fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

CvReport CvReportFromJson(const std::string& text) {
  const nlohmann::json j = internal::ParseJson(text, "cv report");
  if (j.value("format", "") != "mrf-cv-report" || j.value("version", 0) != 1) {
    Fail(ErrorCode::kSchema, "not a version-1 cv report");
  }
  CvReport report;
  try {
    report.dataset = j.at("dataset").get<std::string>();
    report.method = ParseVariant(j.at("method").get<std::string>());
    report.folds = j.at("folds").get<int>();
    report.repeats = j.at("repeats").get<int>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.mean_accuracy = j.at("mean_accuracy").get<double>();
    report.std_accuracy = j.at("std_accuracy").get<double>();
    for (const auto& r : j.at("results")) {
      report.results.push_back({r.at("repeat").get<int>(), r.at("fold").get<int>(),
                                r.at("test_size").get<std::size_t>(),
                                r.at("accuracy").get<double>(),
                                r.at("seconds").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("cv report: ") + e.what());
  }
  return report;
}

SweepReport SweepReportFromJson(const std::string& text) {
  const nlohmann::json j = internal::ParseJson(text, "sweep report");
  if (j.value("format", "") != "mrf-sweep-report" || j.value("version", 0) != 1) {
    Fail(ErrorCode::kSchema, "not a version-1 sweep report");
  }
  SweepReport report;
  try {
    report.dataset = j.at("dataset").get<std::string>();
    report.base = internal::MrfConfigFromJson(j.at("base"));
    report.folds = j.at("folds").get<int>();
    report.repeats = j.at("repeats").get<int>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.b1_grid = j.at("b1_grid").get<std::vector<double>>();
    report.b2_grid = j.at("b2_grid").get<std::vector<double>>();
    for (const auto& c : j.at("cells")) {
      report.cells.push_back({c.at("b1").get<double>(), c.at("b2").get<double>(),
                              c.at("mean_accuracy").get<double>(),
                              c.at("std_accuracy").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("sweep report: ") + e.what());
  }
  if (report.cells.size() != report.b1_grid.size() * report.b2_grid.size()) {
    Fail(ErrorCode::kSchema, "sweep grid is not rectangular");
  }
  return report;
}

ScoreTable LoadScoreTable(std::istream& in) {
  ScoreTable table;
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kEmpty, "score table is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "dataset,method,accuracy") {
    Fail(ErrorCode::kSchema, "score table header must be dataset,method,accuracy");
  }
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream fields(line);
    std::string dataset, method, accuracy;
    std::getline(fields, dataset, ',');
    std::getline(fields, method, ',');
    std::getline(fields, accuracy);
    char* end = nullptr;
    const double value = std::strtod(accuracy.c_str(), &end);
    if (dataset.empty() || method.empty() || end == accuracy.c_str() ||
        !std::isfinite(value)) {
      Fail(ErrorCode::kParse, "score table line " + std::to_string(line_number));
    }
    table[method][dataset] = value;
  }
  return table;
}

std::map<std::string, double> AverageRanks(const ScoreTable& table) {
  std::map<std::string, double> ranks;
  if (table.empty()) return ranks;
  std::set<std::string> shared;
  for (const auto& [dataset, value] : table.begin()->second) shared.insert(dataset);
  for (const auto& [method, scores] : table) {
    std::erase_if(shared, [&](const std::string& d) { return !scores.contains(d); });
  }
  if (shared.empty()) Fail(ErrorCode::kEmpty, "no dataset is scored by every method");
  for (const auto& [method, scores] : table) ranks[method] = 0.0;
  for (const std::string& dataset : shared) {
    std::vector<double> negated;
    for (const auto& [method, scores] : table) negated.push_back(-scores.at(dataset));
    const std::vector<double> r = MidRanks(negated, 0.0);
    std::size_t i = 0;
    for (const auto& [method, scores] : table) ranks[method] += r[i++];
  }
  for (auto& [method, total] : ranks) total /= static_cast<double>(shared.size());
  return ranks;
}

}  // namespace mrf
