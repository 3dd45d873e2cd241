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

#include "mrf/forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json_io.h"
#include "mrf/error.h"
#include "mrf/privacy.h"
#include "parallel.h"
#include "tree_grower.h"

namespace mrf {
namespace {

using internal::OrderedJson;

void ValidateMrfConfig(const MrfConfig& config, std::size_t rows) {
  if (config.num_trees < 1) Fail(ErrorCode::kConfig, "num_trees must be >= 1");
  if (config.min_leaf < 1) Fail(ErrorCode::kConfig, "min_leaf must be >= 1");
  if (!(config.partition_rate > 0.0) || !std::isfinite(config.partition_rate)) {
    Fail(ErrorCode::kConfig, "partition_rate must be positive");
  }
  if (config.max_depth && *config.max_depth < 0) {
    Fail(ErrorCode::kConfig, "max_depth must be >= 0");
  }
  if (rows < 2 * static_cast<std::size_t>(config.min_leaf)) {
    Fail(ErrorCode::kConfig, "need at least 2 * min_leaf = " +
                                 std::to_string(2 * config.min_leaf) +
                                 " training rows, got " + std::to_string(rows));
  }
  if (config.privacy) {
    const PrivacySettings& p = *config.privacy;
    if (!(p.epsilon > 0.0) || !(p.b1_share > 0.0 && p.b1_share < 1.0)) {
      Fail(ErrorCode::kConfig, "privacy needs epsilon > 0 and 0 < b1_share < 1");
    }
  }
}

std::vector<RowIndex> AllRows(const Dataset& data) {
  std::vector<RowIndex> rows(data.num_rows());
  std::iota(rows.begin(), rows.end(), RowIndex{0});
  return rows;
}

// Greedy CART over `mtry` features drawn without replacement. Ties go to
// the lowest feature index, then the lowest threshold.
class GreedyPolicy : public internal::SplitPolicy {
 public:
  GreedyPolicy(int min_leaf, int mtry) : min_leaf_(min_leaf), mtry_(mtry) {}

  bool WantsSplit(const internal::NodeContext& node) const override {
    if (node.structure_size() <= static_cast<std::size_t>(min_leaf_)) return false;
    const ClassCounts& counts = node.structure_counts;
    return counts[counts.Majority()] < counts.total();
  }

  std::optional<SplitCandidate> Choose(internal::NodeContext& node,
                                       Rng& rng) const override {
    const int d = node.num_features();
    std::vector<int> pool(static_cast<std::size_t>(d));
    std::iota(pool.begin(), pool.end(), 0);
    const int draws = std::min(mtry_, d);
    for (int i = 0; i < draws; ++i) {
      const auto j = static_cast<std::size_t>(i) +
                     static_cast<std::size_t>(rng.UniformInt(static_cast<std::uint64_t>(d - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(draws));
    std::sort(pool.begin(), pool.end());

    std::optional<SplitCandidate> best;
    for (int feature : pool) {
      for (const SplitCandidate& c : node.Candidates(feature)) {
        if (!best || c.decrease > best->decrease) best = c;
      }
    }
    return best;
  }

 private:
  int min_leaf_;
  int mtry_;
};

}  // namespace

namespace internal {

OrderedJson MrfConfigToJson(const MrfConfig& c) {
  OrderedJson j;
  j["b1"] = internal::ConcentrationToJson(c.b1);
  j["b2"] = internal::ConcentrationToJson(c.b2);
  j["b3"] = internal::ConcentrationToJson(c.b3);
  j["min_leaf"] = c.min_leaf;
  j["num_trees"] = c.num_trees;
  j["partition_rate"] = c.partition_rate;
  j["criterion"] = std::string(CriterionName(c.criterion));
  j["max_depth"] = c.max_depth ? OrderedJson(*c.max_depth) : OrderedJson(nullptr);
  if (c.privacy) {
    j["privacy"] = {{"epsilon", c.privacy->epsilon},
                    {"b1_share", c.privacy->b1_share}};
  } else {
    j["privacy"] = nullptr;
  }
  j["seed"] = c.seed;
  j["num_threads"] = c.num_threads;
  return j;
}

MrfConfig MrfConfigFromJson(const nlohmann::json& j) {
  MrfConfig c;
  c.b1 = internal::ConcentrationFromJson(j.at("b1"));
  c.b2 = internal::ConcentrationFromJson(j.at("b2"));
  c.b3 = internal::ConcentrationFromJson(j.at("b3"));
  c.min_leaf = j.at("min_leaf").get<int>();
  c.num_trees = j.at("num_trees").get<int>();
  c.partition_rate = j.at("partition_rate").get<double>();
  c.criterion = ParseCriterion(j.at("criterion").get<std::string>());
  if (!j.at("max_depth").is_null()) c.max_depth = j.at("max_depth").get<int>();
  if (!j.at("privacy").is_null()) {
    c.privacy = PrivacySettings{j.at("privacy").at("epsilon").get<double>(),
                                j.at("privacy").at("b1_share").get<double>()};
  }
  c.seed = j.at("seed").get<std::uint64_t>();
  c.num_threads = j.value("num_threads", 0);
  return c;
}

OrderedJson BaselineConfigToJson(const BaselineConfig& c) {
  OrderedJson j;
  j["num_trees"] = c.num_trees;
  j["min_leaf"] = c.min_leaf;
  j["mtry"] = c.mtry ? OrderedJson(*c.mtry) : OrderedJson(nullptr);
  j["bootstrap"] = c.bootstrap;
  j["criterion"] = std::string(CriterionName(c.criterion));
  j["max_depth"] = c.max_depth ? OrderedJson(*c.max_depth) : OrderedJson(nullptr);
  j["seed"] = c.seed;
  j["num_threads"] = c.num_threads;
  return j;
}

BaselineConfig BaselineConfigFromJson(const nlohmann::json& j) {
  BaselineConfig c;
  c.num_trees = j.at("num_trees").get<int>();
  c.min_leaf = j.at("min_leaf").get<int>();
  if (!j.at("mtry").is_null()) c.mtry = j.at("mtry").get<int>();
  c.bootstrap = j.at("bootstrap").get<bool>();
  c.criterion = ParseCriterion(j.at("criterion").get<std::string>());
  if (!j.at("max_depth").is_null()) c.max_depth = j.at("max_depth").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.num_threads = j.value("num_threads", 0);
  return c;
}

}  // namespace internal

using internal::BaselineConfigFromJson;
using internal::BaselineConfigToJson;
using internal::MrfConfigFromJson;
using internal::MrfConfigToJson;

std::string_view VariantName(ForestVariant variant) {
  switch (variant) {
    case ForestVariant::kMrf: return "mrf";
    case ForestVariant::kBreiman: return "breiman";
    case ForestVariant::kCompletelyRandom: return "completely_random";
  }
  return "mrf";
}

ForestVariant ParseVariant(std::string_view name) {
  if (name == "mrf") return ForestVariant::kMrf;
  if (name == "breiman") return ForestVariant::kBreiman;
  if (name == "completely_random" || name == "completely-random") {
    return ForestVariant::kCompletelyRandom;
  }
  Fail(ErrorCode::kConfig, "unknown method '" + std::string(name) + "'");
}

MrfConfig CompletelyRandomConfig(MrfConfig base) {
  base.b1 = Concentration(0.0);
  base.b2 = Concentration(0.0);
  return base;
}

Forest TrainMrf(const Dataset& data, std::span<const RowIndex> rows,
                const MrfConfig& config) {
  ValidateMrfConfig(config, rows.size());
  MrfConfig effective = config;
  TreeParams params;
  params.b1 = config.b1;
  params.b2 = config.b2;
  params.min_leaf = config.min_leaf;
  params.criterion = config.criterion;
  params.max_depth = config.max_depth;
  if (config.privacy) {
    const std::size_t structure_size = StructureSize(rows.size(), config.partition_rate);
    const auto estimation_size =
        static_cast<std::int64_t>(rows.size() - structure_size);
    const PrivacyBudget budget =
        AllocateBudget(config.privacy->epsilon, config.num_trees, estimation_size,
                       config.min_leaf, config.privacy->b1_share);
    params.b1 = effective.b1 = Concentration(budget.b1);
    params.b2 = effective.b2 = Concentration(budget.b2);
    effective.b3 = Concentration(budget.b3);
    params.max_depth = config.max_depth ? std::min(*config.max_depth, budget.depth)
                                        : budget.depth;
    effective.max_depth = params.max_depth;
  }

  Forest forest;
  forest.variant_ = (params.b1 == Concentration(0.0) && params.b2 == Concentration(0.0))
                        ? ForestVariant::kCompletelyRandom
                        : ForestVariant::kMrf;
  forest.b3_ = effective.b3;
  forest.mrf_config_ = effective;
  forest.class_names_ = data.class_names();
  forest.feature_names_ = data.feature_names();
  forest.label_name_ = data.label_name();
  forest.num_threads_ = config.num_threads;
  forest.trees_.resize(static_cast<std::size_t>(config.num_trees));

  internal::ParallelFor(forest.trees_.size(), config.num_threads, [&](std::size_t i) {
    Rng rng = Rng::ForStream(config.seed, i);
    const Partition partition = PartitionRows(rows, config.partition_rate, rng);
    forest.trees_[i] =
        BuildMrfTree(data, partition.structure, partition.estimation, params, rng);
  });
  return forest;
}

Forest TrainMrf(const Dataset& data, const MrfConfig& config) {
  const std::vector<RowIndex> rows = AllRows(data);
  return TrainMrf(data, rows, config);
}

Forest TrainBaselineRf(const Dataset& data, std::span<const RowIndex> rows,
                       const BaselineConfig& config) {
  if (config.num_trees < 1) Fail(ErrorCode::kConfig, "num_trees must be >= 1");
  if (config.min_leaf < 1) Fail(ErrorCode::kConfig, "min_leaf must be >= 1");
  if (rows.empty()) Fail(ErrorCode::kConfig, "no training rows");
  const int d = static_cast<int>(data.num_features());
  const int mtry = config.mtry.value_or(
      std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d))))));
  if (mtry < 1 || mtry > d) Fail(ErrorCode::kConfig, "mtry must be in [1, D]");

  Forest forest;
  forest.variant_ = ForestVariant::kBreiman;
  forest.b3_ = Concentration::Infinite();
  forest.baseline_config_ = config;
  forest.class_names_ = data.class_names();
  forest.feature_names_ = data.feature_names();
  forest.label_name_ = data.label_name();
  forest.num_threads_ = config.num_threads;
  forest.trees_.resize(static_cast<std::size_t>(config.num_trees));

  const GreedyPolicy policy(config.min_leaf, mtry);
  internal::ParallelFor(forest.trees_.size(), config.num_threads, [&](std::size_t i) {
    Rng rng = Rng::ForStream(config.seed, i);
    std::vector<RowIndex> sample;
    if (config.bootstrap) {
      sample.resize(rows.size());
      for (RowIndex& r : sample) r = rows[rng.UniformInt(rows.size())];
    } else {
      sample.assign(rows.begin(), rows.end());
    }
    // Leaves are labelled by the in-bag rows themselves.
    internal::TreeGrower grower(data, sample, sample, config.criterion,
                                config.max_depth);
    forest.trees_[i] = grower.Grow(policy, rng);
  });
  return forest;
}

Forest TrainBaselineRf(const Dataset& data, const BaselineConfig& config) {
  const std::vector<RowIndex> rows = AllRows(data);
  return TrainBaselineRf(data, rows, config);
}

int MajorityVote(std::span<const int> votes_per_class) {
  return static_cast<int>(
      std::max_element(votes_per_class.begin(), votes_per_class.end()) -
      votes_per_class.begin());
}

int Predict(const Forest& forest, std::span<const double> x, Rng& rng) {
  std::vector<int> tally(static_cast<std::size_t>(forest.num_classes()), 0);
  for (const Tree& tree : forest.trees()) {
    ++tally[static_cast<std::size_t>(PredictTree(tree, x, forest.b3(), rng))];
  }
  return MajorityVote(tally);
}

namespace {

template <typename RowAt>
BatchPrediction PredictRows(const Forest& forest, std::size_t num_rows,
                            std::uint64_t seed, RowAt&& row_at) {
  BatchPrediction out;
  out.num_trees = forest.num_trees();
  out.num_rows = num_rows;
  out.classes.assign(num_rows, 0);
  out.votes.assign(out.num_trees * num_rows, 0);
  const auto k = static_cast<std::size_t>(forest.num_classes());
  internal::ParallelFor(num_rows, forest.num_threads(), [&](std::size_t r) {
    Rng rng = Rng::ForStream(seed, r);
    const std::span<const double> x = row_at(r);
    std::vector<int> tally(k, 0);
    for (std::size_t t = 0; t < out.num_trees; ++t) {
      const int vote = PredictTree(forest.trees()[t], x, forest.b3(), rng);
      out.votes[t * num_rows + r] = vote;
      ++tally[static_cast<std::size_t>(vote)];
    }
    out.classes[r] = MajorityVote(tally);
  });
  return out;
}

}  // namespace

BatchPrediction PredictBatch(const Forest& forest, const FeatureMatrix& rows,
                             std::uint64_t seed) {
  if (rows.num_rows() > 0 && rows.num_features != forest.num_features()) {
    Fail(ErrorCode::kSchema, "row width does not match the forest");
  }
  return PredictRows(forest, rows.num_rows(), seed,
                     [&](std::size_t r) { return rows.row(r); });
}

BatchPrediction PredictBatch(const Forest& forest, const Dataset& data,
                             std::span<const RowIndex> rows, std::uint64_t seed) {
  if (data.num_features() != forest.num_features()) {
    Fail(ErrorCode::kSchema, "dataset width does not match the forest");
  }
  return PredictRows(forest, rows.size(), seed,
                     [&](std::size_t r) { return data.row(rows[r]); });
}

std::string ForestToJson(const Forest& forest) {
  OrderedJson doc;
  doc["format"] = "mrf-forest";
  doc["version"] = 1;
  doc["variant"] = std::string(VariantName(forest.variant()));
  doc["b3"] = internal::ConcentrationToJson(forest.b3());
  if (forest.mrf_config()) doc["mrf_config"] = MrfConfigToJson(*forest.mrf_config());
  if (forest.baseline_config()) {
    doc["baseline_config"] = BaselineConfigToJson(*forest.baseline_config());
  }
  doc["label_name"] = forest.label_name();
  doc["class_names"] = forest.class_names();
  doc["feature_names"] = forest.feature_names();
  OrderedJson trees = OrderedJson::array();
  for (const Tree& tree : forest.trees()) trees.push_back(internal::TreeToJsonValue(tree));
  doc["trees"] = std::move(trees);
  return doc.dump();
}

Forest ForestFromJson(const std::string& text) {
  const nlohmann::json doc = internal::ParseJson(text, "forest document");
  if (doc.value("format", "") != "mrf-forest" || doc.value("version", 0) != 1) {
    Fail(ErrorCode::kSchema, "not a version-1 forest document");
  }
  Forest forest;
  try {
    forest.variant_ = ParseVariant(doc.at("variant").get<std::string>());
    forest.b3_ = internal::ConcentrationFromJson(doc.at("b3"));
    if (doc.contains("mrf_config")) {
      forest.mrf_config_ = MrfConfigFromJson(doc.at("mrf_config"));
      forest.num_threads_ = forest.mrf_config_->num_threads;
    }
    if (doc.contains("baseline_config")) {
      forest.baseline_config_ = BaselineConfigFromJson(doc.at("baseline_config"));
      forest.num_threads_ = forest.baseline_config_->num_threads;
    }
    forest.label_name_ = doc.at("label_name").get<std::string>();
    forest.class_names_ = doc.at("class_names").get<std::vector<std::string>>();
    forest.feature_names_ = doc.at("feature_names").get<std::vector<std::string>>();
    for (const auto& tree : doc.at("trees")) {
      forest.trees_.push_back(internal::TreeFromJsonValue(tree));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("forest document: ") + e.what());
  }
  if (forest.trees_.empty()) Fail(ErrorCode::kSchema, "forest has no trees");
  for (const Tree& tree : forest.trees_) {
    if (tree.num_classes() != forest.num_classes()) {
      Fail(ErrorCode::kSchema, "tree class count does not match the forest");
    }
  }
  return forest;
}

}  // namespace mrf
