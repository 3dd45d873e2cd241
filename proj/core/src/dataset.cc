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

#include "mrf/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "json.hpp"
#include "mrf/error.h"

namespace mrf {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits one line. Supports double-quoted cells without embedded newlines.
std::vector<std::string> SplitLine(std::string_view line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      cells.emplace_back(Trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.emplace_back(Trim(cell));
  return cells;
}

double ParseCell(const std::string& cell, std::size_t line_no,
                 const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ", column '" +
                                column + "': not a number: '" + cell + "'");
  }
  if (!std::isfinite(value)) {
    Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ", column '" +
                                column + "': non-finite value '" + cell + "'");
  }
  return value;
}

bool IsBlank(std::string_view line) { return Trim(line).empty(); }

std::vector<std::string> ReadHeader(std::istream& input, char delimiter) {
  std::string line;
  while (std::getline(input, line)) {
    if (!IsBlank(line)) {
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
      }
      return SplitLine(line, delimiter);
    }
  }
  Fail(ErrorCode::kEmpty, "input has no header row");
}

std::size_t ResolveLabelColumn(const std::vector<std::string>& header,
                               const std::string& spec) {
  if (spec.empty()) return header.size() - 1;
  const auto it = std::find(header.begin(), header.end(), spec);
  if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  std::size_t index = 0;
  const auto [ptr, ec] =
      std::from_chars(spec.data(), spec.data() + spec.size(), index);
  if (ec == std::errc() && ptr == spec.data() + spec.size() &&
      index < header.size()) {
    return index;
  }
  Fail(ErrorCode::kSchema, "label column '" + spec + "' not found");
}

}  // namespace

Dataset::Dataset(std::vector<double> features, std::vector<int> labels,
                 std::vector<std::string> feature_names,
                 std::vector<std::string> class_names, std::string label_name)
    : rows_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)),
      label_name_(std::move(label_name)) {
  const std::size_t n = labels_.size();
  const std::size_t d = feature_names_.size();
  if (n == 0) Fail(ErrorCode::kEmpty, "dataset has no rows");
  if (d == 0) Fail(ErrorCode::kSchema, "dataset has no feature columns");
  if (class_names_.size() < 2) {
    Fail(ErrorCode::kSchema, "need at least 2 classes, got " +
                                 std::to_string(class_names_.size()));
  }
  if (rows_.size() != n * d) {
    Fail(ErrorCode::kMismatch, "feature matrix size does not match n x D");
  }
  const int k = num_classes();
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_[i] < 0 || labels_[i] >= k) {
      Fail(ErrorCode::kSchema, "label out of range at row " + std::to_string(i));
    }
  }
  columns_.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = rows_[i * d + j];
      if (!std::isfinite(v)) {
        Fail(ErrorCode::kParse, "non-finite feature value at row " +
                                    std::to_string(i));
      }
      columns_[j * n + i] = v;
    }
  }
}

Dataset LoadCsv(std::istream& input, const CsvOptions& options) {
  const std::vector<std::string> header = ReadHeader(input, options.delimiter);
  const std::size_t label_col = ResolveLabelColumn(header, options.label_column);

  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_col) feature_names.push_back(header[j]);
  }

  std::vector<std::string> class_names = options.class_names;
  std::unordered_map<std::string, int> class_index;
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    class_index.emplace(class_names[c], static_cast<int>(c));
  }
  const bool fixed_classes = !class_names.empty();

  std::vector<double> features;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(input, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    const std::vector<std::string> cells = SplitLine(line, options.delimiter);
    if (cells.size() != header.size()) {
      Fail(ErrorCode::kParse, "line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) +
                                  " cells, header has " +
                                  std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j == label_col) continue;
      features.push_back(ParseCell(cells[j], line_no, header[j]));
    }
    const std::string& raw_label = cells[label_col];
    auto it = class_index.find(raw_label);
    if (it == class_index.end()) {
      if (fixed_classes) {
        Fail(ErrorCode::kSchema, "unknown label '" + raw_label + "' on line " +
                                     std::to_string(line_no));
      }
      it = class_index.emplace(raw_label, static_cast<int>(class_names.size()))
               .first;
      class_names.push_back(raw_label);
    }
    labels.push_back(it->second);
  }
  if (labels.empty()) Fail(ErrorCode::kEmpty, "input has no data rows");
  if (class_names.size() < 2) {
    Fail(ErrorCode::kSchema, "label column has fewer than 2 classes");
  }
  return Dataset(std::move(features), std::move(labels),
                 std::move(feature_names), std::move(class_names),
                 header[label_col]);
}

Dataset LoadCsvFile(const std::string& path, const CsvOptions& options) {
  std::ifstream input(path);
  if (!input) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return LoadCsv(input, options);
}

FeatureMatrix LoadFeatureCsv(std::istream& input,
                             const std::vector<std::string>& feature_names,
                             char delimiter) {
  const std::vector<std::string> header = ReadHeader(input, delimiter);
  std::vector<std::size_t> source;
  for (const std::string& name : feature_names) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      Fail(ErrorCode::kSchema, "feature column '" + name + "' not found");
    }
    source.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  FeatureMatrix matrix;
  matrix.num_features = feature_names.size();
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(input, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    const std::vector<std::string> cells = SplitLine(line, delimiter);
    if (cells.size() != header.size()) {
      Fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                  " does not match the header width");
    }
    for (std::size_t j : source) {
      matrix.values.push_back(ParseCell(cells[j], line_no, header[j]));
    }
  }
  return matrix;
}

std::size_t StructureSize(std::size_t n, double rate) {
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * rate / (1.0 + rate) + 0.5));
}

Partition PartitionRows(std::span<const RowIndex> rows, double rate, Rng& rng) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    Fail(ErrorCode::kDomain, "partition rate must be positive and finite");
  }
  const std::size_t n = rows.size();
  const std::size_t structure_size = StructureSize(n, rate);
  if (n < 2 || structure_size == 0 || structure_size >= n) {
    Fail(ErrorCode::kSize, "cannot partition " + std::to_string(n) +
                               " rows at rate " + std::to_string(rate) +
                               " into two nonempty sides");
  }
  std::vector<RowIndex> shuffled(rows.begin(), rows.end());
  rng.Shuffle(std::span<RowIndex>(shuffled));
  Partition partition;
  partition.rate = rate;
  partition.structure.assign(shuffled.begin(),
                             shuffled.begin() + static_cast<std::ptrdiff_t>(structure_size));
  partition.estimation.assign(
      shuffled.begin() + static_cast<std::ptrdiff_t>(structure_size),
      shuffled.end());
  return partition;
}

Partition PartitionDataset(const Dataset& dataset, double rate, Rng& rng) {
  std::vector<RowIndex> all(dataset.num_rows());
  std::iota(all.begin(), all.end(), RowIndex{0});
  return PartitionRows(all, rate, rng);
}

FoldPlan MakeFolds(std::size_t n, int folds, int repeats, std::uint64_t seed) {
  if (folds < 2 || repeats < 1) {
    Fail(ErrorCode::kConfig, "need folds >= 2 and repeats >= 1");
  }
  if (static_cast<std::size_t>(folds) > n) {
    Fail(ErrorCode::kSize, std::to_string(folds) + " folds for " +
                               std::to_string(n) + " rows");
  }
  FoldPlan plan;
  plan.num_rows = n;
  plan.folds = folds;
  plan.repeats = repeats;
  const std::size_t base = n / static_cast<std::size_t>(folds);
  const std::size_t extra = n % static_cast<std::size_t>(folds);
  for (int r = 0; r < repeats; ++r) {
    Rng rng = Rng::ForStream(seed, static_cast<std::uint64_t>(r));
    std::vector<RowIndex> order(n);
    std::iota(order.begin(), order.end(), RowIndex{0});
    rng.Shuffle(std::span<RowIndex>(order));
    // fold_of[i] for the i-th shuffled position; first `extra` folds get +1.
    std::vector<int> fold_of(n);
    std::size_t pos = 0;
    for (int f = 0; f < folds; ++f) {
      const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
      for (std::size_t i = 0; i < size; ++i) fold_of[order[pos++]] = f;
    }
    for (int f = 0; f < folds; ++f) {
      FoldAssignment assignment;
      for (std::size_t i = 0; i < n; ++i) {
        (fold_of[i] == f ? assignment.test : assignment.train)
            .push_back(static_cast<RowIndex>(i));
      }
      plan.assignments.push_back(std::move(assignment));
    }
  }
  return plan;
}

std::string FoldPlanToJson(const FoldPlan& plan) {
  nlohmann::ordered_json doc;
  doc["format"] = "mrf-fold-plan";
  doc["version"] = 1;
  doc["num_rows"] = plan.num_rows;
  doc["repeats"] = plan.repeats;
  doc["folds"] = plan.folds;
  nlohmann::ordered_json tests = nlohmann::ordered_json::array();
  for (const FoldAssignment& a : plan.assignments) tests.push_back(a.test);
  doc["test_indices"] = std::move(tests);
  return doc.dump(2);
}

FoldPlan FoldPlanFromJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("fold plan: ") + e.what());
  }
  if (doc.value("format", "") != "mrf-fold-plan" || doc.value("version", 0) != 1) {
    Fail(ErrorCode::kSchema, "not a version-1 fold plan document");
  }
  FoldPlan plan;
  try {
    plan.num_rows = doc.at("num_rows").get<std::size_t>();
    plan.repeats = doc.at("repeats").get<int>();
    plan.folds = doc.at("folds").get<int>();
    const auto& tests = doc.at("test_indices");
    if (tests.size() != static_cast<std::size_t>(plan.repeats * plan.folds)) {
      Fail(ErrorCode::kSchema, "fold plan has wrong number of folds");
    }
    for (std::size_t a = 0; a < tests.size(); ++a) {
      FoldAssignment assignment;
      assignment.test = tests[a].get<std::vector<RowIndex>>();
      std::vector<char> in_test(plan.num_rows, 0);
      for (RowIndex i : assignment.test) {
        if (i >= plan.num_rows) Fail(ErrorCode::kSchema, "fold index out of range");
        in_test[i] = 1;
      }
      for (std::size_t i = 0; i < plan.num_rows; ++i) {
        if (!in_test[i]) assignment.train.push_back(static_cast<RowIndex>(i));
      }
      plan.assignments.push_back(std::move(assignment));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("fold plan: ") + e.what());
  }
  return plan;
}

}  // namespace mrf
