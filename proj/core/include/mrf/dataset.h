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

#ifndef MRF_DATASET_H_
#define MRF_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "mrf/random.h"

namespace mrf {

using RowIndex = std::uint32_t;

// Immutable table of finite numeric features and dense integer labels.
// Stored both row-major (prediction) and column-major (split search).
class Dataset {
 public:
  // Validates: n >= 1, D >= 1, K >= 2, labels in [0, K), finite features.
  // `features` is row-major n x D. `class_names` has K entries and records
  // the original label spelling for each dense label.
  Dataset(std::vector<double> features, std::vector<int> labels,
          std::vector<std::string> feature_names,
          std::vector<std::string> class_names,
          std::string label_name = "label");

  std::size_t num_rows() const { return labels_.size(); }
  std::size_t num_features() const { return feature_names_.size(); }
  int num_classes() const { return static_cast<int>(class_names_.size()); }

  double value(std::size_t row, std::size_t feature) const {
    return columns_[feature * num_rows() + row];
  }
  int label(std::size_t row) const { return labels_[row]; }

  std::span<const double> row(std::size_t row) const {
    return {rows_.data() + row * num_features(), num_features()};
  }
  std::span<const double> column(std::size_t feature) const {
    return {columns_.data() + feature * num_rows(), num_rows()};
  }
  std::span<const int> labels() const { return labels_; }

  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::string& label_name() const { return label_name_; }

 private:
  std::vector<double> rows_;
  std::vector<double> columns_;
  std::vector<int> labels_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
  std::string label_name_;
};

struct CsvOptions {
  char delimiter = ',';
  // Column name or zero-based index. Empty selects the last column.
  std::string label_column;
  // When non-empty, labels are encoded with this fixed mapping instead of
  // first-appearance order; unknown labels raise SchemaError.
  std::vector<std::string> class_names;
};

// Parses delimiter-separated text with a header row. Labels are re-indexed
// densely in order of first appearance; row order is preserved.
Dataset LoadCsv(std::istream& input, const CsvOptions& options = {});
Dataset LoadCsvFile(const std::string& path, const CsvOptions& options = {});

// Row-major feature matrix read from CSV by column name, for prediction
// inputs. Columns not in `feature_names` (such as a label) are ignored.
struct FeatureMatrix {
  std::size_t num_features = 0;
  std::vector<double> values;

  std::size_t num_rows() const {
    return num_features == 0 ? 0 : values.size() / num_features;
  }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * num_features, num_features};
  }
};
FeatureMatrix LoadFeatureCsv(std::istream& input,
                             const std::vector<std::string>& feature_names,
                             char delimiter = ',');

// Disjoint structure / estimation split of a row set.
struct Partition {
  std::vector<RowIndex> structure;
  std::vector<RowIndex> estimation;
  double rate = 1.0;
};

// Structure-side size: round-half-up of n * rate / (1 + rate).
std::size_t StructureSize(std::size_t n, double rate);

// Uniformly random partition of `rows`. Throws SizeError when either side
// would be empty and DomainError for a non-positive rate.
Partition PartitionRows(std::span<const RowIndex> rows, double rate, Rng& rng);
Partition PartitionDataset(const Dataset& dataset, double rate, Rng& rng);

struct FoldAssignment {
  std::vector<RowIndex> train;
  std::vector<RowIndex> test;
};

// Repeated k-fold plan. assignments[repeat * folds + fold].
struct FoldPlan {
  std::size_t num_rows = 0;
  int repeats = 0;
  int folds = 0;
  std::vector<FoldAssignment> assignments;

  const FoldAssignment& at(int repeat, int fold) const {
    return assignments[static_cast<std::size_t>(repeat * folds + fold)];
  }
};

FoldPlan MakeFolds(std::size_t n, int folds, int repeats, std::uint64_t seed);

std::string FoldPlanToJson(const FoldPlan& plan);
FoldPlan FoldPlanFromJson(const std::string& text);

}  // namespace mrf

#endif  // MRF_DATASET_H_
