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

#ifndef MRF_FOREST_H_
#define MRF_FOREST_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrf/dataset.h"
#include "mrf/impurity.h"
#include "mrf/random.h"
#include "mrf/split_selection.h"
#include "mrf/tree.h"

namespace mrf {

enum class ForestVariant { kMrf, kBreiman, kCompletelyRandom };

std::string_view VariantName(ForestVariant variant);
ForestVariant ParseVariant(std::string_view name);

// Differential-privacy mode: when set, B1, B2, B3 and the depth cap are
// derived from epsilon at training time and override the explicit values.
struct PrivacySettings {
  double epsilon = 1.0;
  // Fraction of each layer's budget spent on feature selection (B1).
  double b1_share = 0.5;

  bool operator==(const PrivacySettings&) const = default;
};

struct MrfConfig {
  Concentration b1{10.0};
  Concentration b2{10.0};
  Concentration b3 = Concentration::Infinite();
  int min_leaf = 5;
  int num_trees = 100;
  double partition_rate = 1.0;
  Criterion criterion = Criterion::kGini;
  std::optional<int> max_depth;
  std::optional<PrivacySettings> privacy;
  std::uint64_t seed = 0;
  // Worker threads for training and batch prediction; 0 uses the hardware
  // concurrency. Results do not depend on this value.
  int num_threads = 0;

  bool operator==(const MrfConfig&) const = default;
};

// B1 = B2 = 0: every feature and split value drawn uniformly.
MrfConfig CompletelyRandomConfig(MrfConfig base);

struct BaselineConfig {
  int num_trees = 100;
  int min_leaf = 5;
  // Features drawn per node; unset means floor(sqrt(D)).
  std::optional<int> mtry;
  bool bootstrap = true;
  Criterion criterion = Criterion::kGini;
  std::optional<int> max_depth;
  std::uint64_t seed = 0;
  int num_threads = 0;

  bool operator==(const BaselineConfig&) const = default;
};

class Forest {
 public:
  ForestVariant variant() const { return variant_; }
  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t num_trees() const { return trees_.size(); }
  int num_classes() const { return static_cast<int>(class_names_.size()); }
  std::size_t num_features() const { return feature_names_.size(); }

  // Label mechanism scale applied at prediction. Infinite for baselines.
  Concentration b3() const { return b3_; }
  const std::optional<MrfConfig>& mrf_config() const { return mrf_config_; }
  const std::optional<BaselineConfig>& baseline_config() const {
    return baseline_config_;
  }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::string& label_name() const { return label_name_; }
  int num_threads() const { return num_threads_; }

  bool operator==(const Forest&) const = default;

 private:
  friend Forest TrainMrf(const Dataset&, std::span<const RowIndex>,
                         const MrfConfig&);
  friend Forest TrainBaselineRf(const Dataset&, std::span<const RowIndex>,
                                const BaselineConfig&);
  friend Forest ForestFromJson(const std::string&);

  ForestVariant variant_ = ForestVariant::kMrf;
  std::vector<Tree> trees_;
  Concentration b3_ = Concentration::Infinite();
  std::optional<MrfConfig> mrf_config_;
  std::optional<BaselineConfig> baseline_config_;
  std::vector<std::string> class_names_;
  std::vector<std::string> feature_names_;
  std::string label_name_;
  int num_threads_ = 0;
};

// Per tree i: a fresh partition of `rows` from stream i of config.seed,
// then an MRF tree. ConfigError unless |rows| >= 2 * min_leaf and the
// hyper-parameters are valid.
Forest TrainMrf(const Dataset& data, std::span<const RowIndex> rows,
                const MrfConfig& config);
Forest TrainMrf(const Dataset& data, const MrfConfig& config);

// Breiman-style forest: bootstrap + greedy CART over mtry random features.
Forest TrainBaselineRf(const Dataset& data, std::span<const RowIndex> rows,
                       const BaselineConfig& config);
Forest TrainBaselineRf(const Dataset& data, const BaselineConfig& config);

// Majority of per-tree votes (lowest class index on ties). Tree votes are
// drawn from `rng` in tree order.
int Predict(const Forest& forest, std::span<const double> x, Rng& rng);

// Lowest-index argmax of a vote tally.
int MajorityVote(std::span<const int> votes_per_class);

struct BatchPrediction {
  std::size_t num_trees = 0;
  std::size_t num_rows = 0;
  std::vector<int> classes;
  // votes[tree * num_rows + row]: class voted by `tree` for `row`.
  std::vector<int> votes;

  int vote(std::size_t tree, std::size_t row) const {
    return votes[tree * num_rows + row];
  }
};

// Row r uses Rng::ForStream(seed, r), so a single-row batch equals
// Predict(forest, x, Rng::ForStream(seed, 0)).
BatchPrediction PredictBatch(const Forest& forest, const FeatureMatrix& rows,
                             std::uint64_t seed);
BatchPrediction PredictBatch(const Forest& forest, const Dataset& data,
                             std::span<const RowIndex> rows, std::uint64_t seed);

std::string ForestToJson(const Forest& forest);
Forest ForestFromJson(const std::string& text);

}  // namespace mrf

#endif  // MRF_FOREST_H_
