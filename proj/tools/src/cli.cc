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

#include "mrf_cli/cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrf/dataset.h"
#include "mrf/error.h"
#include "mrf/forest.h"
#include "mrf/harness.h"
#include "mrf/privacy.h"

namespace mrf::cli {
namespace {

struct DataFlags {
  std::string path;
  std::string label_column;
  char delimiter = ',';
};

struct ForestFlags {
  std::string method = "mrf";
  int trees = 100;
  int min_leaf = 5;
  std::string b1 = "10";
  std::string b2 = "10";
  std::string b3 = "inf";
  double partition_rate = 1.0;
  std::string criterion = "gini";
  int max_depth = -1;
  double epsilon = 0.0;
  double b1_share = 0.5;
  int mtry = 0;
  bool no_bootstrap = false;
  int threads = 0;
  CLI::Option* epsilon_option = nullptr;
};

struct OutputFlags {
  // Empty: csv for predictions, json for everything else.
  std::string format;
  std::string path = "-";
};

void AddDataFlags(CLI::App* app, DataFlags& flags, bool required = true) {
  app->add_option("--data", flags.path, "CSV file with a header row")
      ->required(required);
  app->add_option("--label-col", flags.label_column,
                  "label column name or zero-based index (default: last)");
  app->add_option("--delimiter", flags.delimiter, "field delimiter");
}

void AddForestFlags(CLI::App* app, ForestFlags& flags) {
  app->add_option("--method", flags.method, "mrf, breiman or completely_random")
      ->check(CLI::IsMember({"mrf", "breiman", "completely_random"}));
  app->add_option("--trees", flags.trees, "number of trees");
  app->add_option("--min-leaf", flags.min_leaf, "minimum leaf size k");
  app->add_option("--b1", flags.b1, "feature concentration B1 (number or inf)");
  app->add_option("--b2", flags.b2, "split value concentration B2 (number or inf)");
  app->add_option("--b3", flags.b3, "label concentration B3 (number or inf)");
  app->add_option("--partition-rate", flags.partition_rate,
                  "structure / estimation size ratio");
  app->add_option("--criterion", flags.criterion, "gini or entropy");
  app->add_option("--max-depth", flags.max_depth, "depth cap (default: none)");
  flags.epsilon_option =
      app->add_option("--epsilon", flags.epsilon, "train with this privacy budget");
  app->add_option("--b1-share", flags.b1_share,
                  "fraction of each layer's budget spent on B1");
  app->add_option("--mtry", flags.mtry, "baseline features per node (default sqrt D)");
  app->add_flag("--no-bootstrap", flags.no_bootstrap, "baseline without bootstrap");
  app->add_option("--threads", flags.threads, "worker threads (0: all cores)");
}

void AddOutputFlags(CLI::App* app, OutputFlags& flags) {
  app->add_option("--format", flags.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", flags.path, "output path, - for stdout");
}

Dataset LoadData(const DataFlags& flags,
                 const std::vector<std::string>& class_names = {}) {
  CsvOptions options;
  options.delimiter = flags.delimiter;
  options.label_column = flags.label_column;
  options.class_names = class_names;
  return LoadCsvFile(flags.path, options);
}

MethodConfig ToMethodConfig(const ForestFlags& flags, std::uint64_t seed) {
  MethodConfig config;
  config.method = ParseVariant(flags.method);
  const Criterion criterion = ParseCriterion(flags.criterion);
  std::optional<int> max_depth;
  if (flags.max_depth >= 0) max_depth = flags.max_depth;

  config.mrf.b1 = Concentration::Parse(flags.b1);
  config.mrf.b2 = Concentration::Parse(flags.b2);
  config.mrf.b3 = Concentration::Parse(flags.b3);
  config.mrf.min_leaf = flags.min_leaf;
  config.mrf.num_trees = flags.trees;
  config.mrf.partition_rate = flags.partition_rate;
  config.mrf.criterion = criterion;
  config.mrf.max_depth = max_depth;
  config.mrf.seed = seed;
  config.mrf.num_threads = flags.threads;
  if (flags.epsilon_option != nullptr && flags.epsilon_option->count() > 0) {
    config.mrf.privacy = PrivacySettings{flags.epsilon, flags.b1_share};
  }

  config.baseline.num_trees = flags.trees;
  config.baseline.min_leaf = flags.min_leaf;
  if (flags.mtry > 0) config.baseline.mtry = flags.mtry;
  config.baseline.bootstrap = !flags.no_bootstrap;
  config.baseline.criterion = criterion;
  config.baseline.max_depth = max_depth;
  config.baseline.seed = seed;
  config.baseline.num_threads = flags.threads;
  return config;
}

Forest Train(const Dataset& data, const MethodConfig& config) {
  switch (config.method) {
    case ForestVariant::kMrf:
      return TrainMrf(data, config.mrf);
    case ForestVariant::kCompletelyRandom:
      return TrainMrf(data, CompletelyRandomConfig(config.mrf));
    case ForestVariant::kBreiman:
      return TrainBaselineRf(data, config.baseline);
  }
  Fail(ErrorCode::kConfig, "unknown method");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void Emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path == "-") {
    out << content;
  } else {
    WriteReport(content, path);
  }
}

std::string DatasetName(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// "0,5,10" or "start:stop:step" (inclusive).
std::vector<double> ParseGrid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double start = 0;
    double stop = 0;
    double step = 0;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        !(step > 0) || stop < start) {
      Fail(ErrorCode::kConfig, "bad grid range '" + text + "'");
    }
    for (int i = 0; start + i * step <= stop + 1e-9 * step; ++i) {
      grid.push_back(start + i * step);
    }
    return grid;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      Fail(ErrorCode::kConfig, "bad grid value '" + item + "'");
    }
  }
  if (grid.empty()) Fail(ErrorCode::kConfig, "empty grid");
  return grid;
}

std::vector<RowIndex> AllRows(const Dataset& data) {
  std::vector<RowIndex> rows(data.num_rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<RowIndex>(i);
  return rows;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kDomain:
      return kExitConfig;
    default:
      return kExitData;
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multinomial random forest toolkit", "mrf"};
  app.require_subcommand(1);

  DataFlags data_flags;
  ForestFlags forest_flags;
  OutputFlags output_flags;
  std::uint64_t seed = 0;
  std::string model_path;
  int folds = 10;
  int repeats = 10;
  std::string name;
  std::string compare_method;
  std::string ranks_sidecar;
  std::string b1_grid = "0:20:5";
  std::string b2_grid = "0:20:5";
  std::string mechanism = "all";
  double audit_b1 = 1.0;
  double audit_b2 = 1.0;
  double audit_b3 = 1.0;
  int audit_feature = -1;
  std::string audit_grid;
  int estimation_size = 0;
  int depth = 0;

  auto* train = app.add_subcommand("train", "train a forest and write it as JSON");
  AddDataFlags(train, data_flags);
  AddForestFlags(train, forest_flags);
  train->add_option("--seed", seed, "master seed");
  train->add_option("--out", output_flags.path, "model path, - for stdout");

  auto* predict = app.add_subcommand("predict", "predict labels for a CSV");
  predict->add_option("--model", model_path, "forest JSON")->required();
  predict->add_option("--data", data_flags.path, "CSV with the model's feature columns")
      ->required();
  predict->add_option("--delimiter", data_flags.delimiter, "field delimiter");
  predict->add_option("--seed", seed, "seed for randomized leaf labels");
  AddOutputFlags(predict, output_flags);

  auto* cv = app.add_subcommand("cv", "repeated k-fold cross-validation");
  AddDataFlags(cv, data_flags);
  AddForestFlags(cv, forest_flags);
  AddOutputFlags(cv, output_flags);
  cv->add_option("--seed", seed, "master seed; fixes the fold plan");
  cv->add_option("--folds", folds, "folds per repeat");
  cv->add_option("--repeats", repeats, "repeats");
  cv->add_option("--name", name, "dataset name in the report");
  cv->add_option("--compare", compare_method,
                 "also run this method on the same folds and report a Wilcoxon test")
      ->check(CLI::IsMember({"mrf", "breiman", "completely_random"}));
  cv->add_option("--ranks-sidecar", ranks_sidecar,
                 "dataset,method,accuracy CSV of other methods for average ranks");

  auto* sweep = app.add_subcommand("sweep", "cross-validated (B1, B2) grid");
  AddDataFlags(sweep, data_flags);
  AddForestFlags(sweep, forest_flags);
  AddOutputFlags(sweep, output_flags);
  sweep->add_option("--seed", seed, "master seed; fixes the fold plan");
  sweep->add_option("--folds", folds, "folds per repeat");
  sweep->add_option("--repeats", repeats, "repeats");
  sweep->add_option("--name", name, "dataset name in the report");
  sweep->add_option("--b1-grid", b1_grid, "B1 values: a,b,c or start:stop:step");
  sweep->add_option("--b2-grid", b2_grid, "B2 values: a,b,c or start:stop:step");

  auto* audit = app.add_subcommand("audit", "exhaustive neighbor audit of a micro dataset");
  AddDataFlags(audit, data_flags);
  AddOutputFlags(audit, output_flags);
  audit->add_option("--mechanism", mechanism, "feature, value, label or all")
      ->check(CLI::IsMember({"feature", "value", "label", "all"}));
  audit->add_option("--b1", audit_b1, "feature mechanism budget");
  audit->add_option("--b2", audit_b2, "value mechanism budget");
  audit->add_option("--b3", audit_b3, "label mechanism budget");
  audit->add_option("--feature", audit_feature,
                    "feature for the value mechanism (default: every feature)");
  audit->add_option("--grid", audit_grid, "replacement values, a,b,c");
  audit->add_option("--criterion", forest_flags.criterion, "gini or entropy");

  auto* budget = app.add_subcommand("budget", "allocate and compose a privacy budget");
  budget->add_option("--epsilon", forest_flags.epsilon, "total budget")->required();
  budget->add_option("--trees", forest_flags.trees, "number of trees");
  budget->add_option("--min-leaf", forest_flags.min_leaf, "minimum leaf size k");
  budget->add_option("--estimation-size", estimation_size, "estimation points per tree");
  budget->add_option("--depth", depth, "layers per tree (instead of --estimation-size)");
  budget->add_option("--b1-share", forest_flags.b1_share, "fraction of a layer for B1");
  AddOutputFlags(budget, output_flags);

  auto* tree_dist = app.add_subcommand("tree-dist", "per-tree accuracy of a forest");
  tree_dist->add_option("--model", model_path, "forest JSON")->required();
  AddDataFlags(tree_dist, data_flags);
  tree_dist->add_option("--seed", seed, "seed for randomized leaf labels");
  tree_dist->add_option("--name", name, "dataset name in the report");
  AddOutputFlags(tree_dist, output_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mrf: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (output_flags.format.empty()) output_flags.format = *predict ? "csv" : "json";
    const ReportFormat format = ParseReportFormat(output_flags.format);
    if (name.empty() && !data_flags.path.empty()) name = DatasetName(data_flags.path);

    if (*train) {
      const MethodConfig config = ToMethodConfig(forest_flags, seed);
      const Dataset data = LoadData(data_flags);
      const Forest forest = Train(data, config);
      Emit(ForestToJson(forest) + "\n", output_flags.path, out);
      return kExitOk;
    }

    if (*predict) {
      const Forest forest = ForestFromJson(ReadFile(model_path));
      std::ifstream in(data_flags.path);
      if (!in) Fail(ErrorCode::kIo, "cannot open '" + data_flags.path + "'");
      const FeatureMatrix rows =
          LoadFeatureCsv(in, forest.feature_names(), data_flags.delimiter);
      const BatchPrediction prediction = PredictBatch(forest, rows, seed);
      std::ostringstream text;
      if (format == ReportFormat::kCsv) {
        text << "row," << forest.label_name() << "\n";
        for (std::size_t r = 0; r < prediction.num_rows; ++r) {
          text << r << ',' << forest.class_names()[static_cast<std::size_t>(
                                  prediction.classes[r])] << "\n";
        }
      } else {
        text << "{\"predictions\": [";
        for (std::size_t r = 0; r < prediction.num_rows; ++r) {
          text << (r ? ", " : "") << prediction.classes[r];
        }
        text << "]}\n";
      }
      Emit(text.str(), output_flags.path, out);
      return kExitOk;
    }

    if (*cv) {
      MethodConfig config = ToMethodConfig(forest_flags, seed);
      const Dataset data = LoadData(data_flags);
      const CvOptions options{folds, repeats, seed, forest_flags.threads};
      const CvReport report = RunCv(data, name, config, options);
      Emit(FormatReport(report, format), output_flags.path, out);
      if (!compare_method.empty()) {
        config.method = ParseVariant(compare_method);
        const CvReport other = RunCv(data, name, config, options);
        const std::vector<double> a = report.accuracies();
        const std::vector<double> b = other.accuracies();
        err << VariantName(report.method) << " mean " << report.mean_accuracy << " vs "
            << VariantName(other.method) << " mean " << other.mean_accuracy;
        try {
          const WilcoxonResult test = WilcoxonSignedRank(a, b);
          err << ", Wilcoxon p = " << test.p_value << (test.exact ? " (exact)" : "")
              << "\n";
        } catch (const Error& e) {
          err << ", Wilcoxon not applicable: " << e.what() << "\n";
        }
      }
      if (!ranks_sidecar.empty()) {
        std::ifstream in(ranks_sidecar);
        if (!in) Fail(ErrorCode::kIo, "cannot open '" + ranks_sidecar + "'");
        ScoreTable table = LoadScoreTable(in);
        table[std::string(VariantName(report.method))][name] = report.mean_accuracy;
        for (const auto& [method, rank] : AverageRanks(table)) {
          err << "average rank " << method << " " << rank << "\n";
        }
      }
      return kExitOk;
    }

    if (*sweep) {
      const MethodConfig config = ToMethodConfig(forest_flags, seed);
      const std::vector<double> b1_values = ParseGrid(b1_grid);
      const std::vector<double> b2_values = ParseGrid(b2_grid);
      const Dataset data = LoadData(data_flags);
      const CvOptions options{folds, repeats, seed, forest_flags.threads};
      const SweepReport report =
          Sweep(data, name, b1_values, b2_values, config.mrf, options);
      Emit(FormatReport(report, format), output_flags.path, out);
      return kExitOk;
    }

    if (*audit) {
      const Dataset data = LoadData(data_flags);
      AuditOptions options;
      options.criterion = ParseCriterion(forest_flags.criterion);
      if (!audit_grid.empty()) options.value_grid = ParseGrid(audit_grid);
      std::vector<AuditReport> reports;
      if (mechanism == "feature" || mechanism == "all") {
        reports.push_back(AuditFeatureMechanism(data, audit_b1, options));
      }
      if (mechanism == "value" || mechanism == "all") {
        for (int f = 0; f < static_cast<int>(data.num_features()); ++f) {
          if (audit_feature >= 0 && f != audit_feature) continue;
          reports.push_back(AuditValueMechanism(data, f, audit_b2, options));
        }
      }
      if (mechanism == "label" || mechanism == "all") {
        reports.push_back(AuditLabelMechanism(CountLabels(data, AllRows(data)), audit_b3));
      }
      std::ostringstream text;
      bool pass = true;
      if (format == ReportFormat::kJson) {
        text << "[";
        for (std::size_t i = 0; i < reports.size(); ++i) {
          text << (i ? ",\n" : "\n") << AuditReportToJson(reports[i]);
        }
        text << "\n]\n";
      } else {
        text << "mechanism,budget,worst_ratio,bound,pass,neighbors_checked,"
                "candidate_set_changes\n";
        for (const AuditReport& r : reports) {
          text << r.mechanism << ',' << r.budget << ',' << r.worst_ratio << ','
               << r.bound << ',' << (r.pass ? "true" : "false") << ','
               << r.neighbors_checked << ',' << r.candidate_set_changes << "\n";
        }
      }
      for (const AuditReport& r : reports) pass = pass && r.pass;
      Emit(text.str(), output_flags.path, out);
      if (!pass) {
        err << "mrf: audit bound violated\n";
        return kExitAuditViolation;
      }
      return kExitOk;
    }

    if (*budget) {
      PrivacyBudget b;
      if (depth > 0) {
        b = AllocateBudgetForDepth(forest_flags.epsilon, forest_flags.trees, depth,
                                   forest_flags.b1_share);
      } else {
        b = AllocateBudget(forest_flags.epsilon, forest_flags.trees, estimation_size,
                           forest_flags.min_leaf, forest_flags.b1_share);
      }
      const double composed = ComposeBudget(b.b1 + b.b2, b.depth, b.b3, b.num_trees);
      std::ostringstream text;
      text.precision(17);
      if (format == ReportFormat::kJson) {
        text << "{\"epsilon\": " << b.epsilon << ", \"num_trees\": " << b.num_trees
             << ", \"depth\": " << b.depth << ", \"b1\": " << b.b1
             << ", \"b2\": " << b.b2 << ", \"b3\": " << b.b3
             << ", \"composed\": " << composed << "}\n";
      } else {
        text.precision(6);
        text << "epsilon,num_trees,depth,b1,b2,b3,composed\n"
             << b.epsilon << ',' << b.num_trees << ',' << b.depth << ',' << b.b1 << ','
             << b.b2 << ',' << b.b3 << ',' << composed << "\n";
      }
      Emit(text.str(), output_flags.path, out);
      return kExitOk;
    }

    if (*tree_dist) {
      const Forest forest = ForestFromJson(ReadFile(model_path));
      const Dataset data = LoadData(data_flags, forest.class_names());
      if (data.feature_names() != forest.feature_names()) {
        Fail(ErrorCode::kSchema, "data columns do not match the model's features");
      }
      const TreeAccuracyReport report =
          TreeAccuracyDistribution(forest, data, AllRows(data), seed, name);
      Emit(FormatReport(report, format), output_flags.path, out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "mrf: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "mrf: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}

}  // namespace mrf::cli
