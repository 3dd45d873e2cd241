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

#include "mrf/tree.h"

#include <algorithm>
#include <cmath>

#include "json_io.h"
#include "mrf/error.h"
#include "tree_grower.h"

namespace mrf {
namespace internal {

const std::vector<SplitCandidate>& NodeContext::Candidates(int feature) {
  const auto f = static_cast<std::size_t>(feature);
  if (!(*cached_)[f]) {
    (*cache_)[f].clear();
    SweepSortedFeature(*data_, sorted_[f], feature, structure_counts,
                       criterion_, (*cache_)[f]);
    (*cached_)[f] = 1;
  }
  return (*cache_)[f];
}

std::int64_t NodeContext::EstimationLeftCount(int feature,
                                              double threshold) const {
  const std::span<const double> column =
      data_->column(static_cast<std::size_t>(feature));
  std::int64_t count = 0;
  for (RowIndex r : estimation_) count += column[r] <= threshold ? 1 : 0;
  return count;
}

TreeGrower::TreeGrower(const Dataset& data, std::span<const RowIndex> structure,
                       std::span<const RowIndex> estimation,
                       Criterion criterion, std::optional<int> max_depth)
    : data_(data),
      criterion_(criterion),
      max_depth_(max_depth),
      estimation_(estimation.begin(), estimation.end()),
      goes_left_(data.num_rows(), 0),
      buffer_(std::max(structure.size(), estimation.size())),
      cache_(data.num_features()),
      cached_(data.num_features(), 0) {
  sorted_.reserve(data.num_features());
  for (std::size_t j = 0; j < data.num_features(); ++j) {
    std::vector<RowIndex> order(structure.begin(), structure.end());
    const std::span<const double> column = data.column(j);
    std::sort(order.begin(), order.end(), [&](RowIndex a, RowIndex b) {
      return column[a] < column[b] || (column[a] == column[b] && a < b);
    });
    sorted_.push_back(std::move(order));
  }
}

void TreeGrower::PartitionSlices(const Frame& frame, const SplitCandidate& split,
                                 std::size_t& s_mid, std::size_t& e_mid) {
  const auto f = static_cast<std::size_t>(split.feature);
  const std::span<const double> column = data_.column(f);
  for (std::size_t i = frame.s_begin; i < frame.s_end; ++i) {
    const RowIndex r = sorted_[f][i];
    goes_left_[r] = column[r] <= split.threshold ? 1 : 0;
  }
  auto stable_split = [&](std::vector<RowIndex>& rows, std::size_t begin,
                          std::size_t end) {
    std::size_t out = begin;
    std::size_t spill = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (goes_left_[rows[i]]) {
        rows[out++] = rows[i];
      } else {
        buffer_[spill++] = rows[i];
      }
    }
    std::copy(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(spill),
              rows.begin() + static_cast<std::ptrdiff_t>(out));
    return out;
  };
  s_mid = frame.s_begin;
  for (auto& rows : sorted_) s_mid = stable_split(rows, frame.s_begin, frame.s_end);
  for (std::size_t i = frame.e_begin; i < frame.e_end; ++i) {
    const RowIndex r = estimation_[i];
    goes_left_[r] = column[r] <= split.threshold ? 1 : 0;
  }
  e_mid = stable_split(estimation_, frame.e_begin, frame.e_end);
}

Tree TreeGrower::Grow(const SplitPolicy& policy, Rng& rng) {
  const int k = data_.num_classes();
  std::vector<TreeNode> nodes(1);
  std::vector<Frame> stack;
  stack.push_back(Frame{0, 0, sorted_.empty() ? 0 : sorted_[0].size(), 0,
                        estimation_.size(), 0, std::vector<double>()});

  NodeContext context;
  context.data_ = &data_;
  context.criterion_ = criterion_;
  context.cache_ = &cache_;
  context.cached_ = &cached_;
  context.sorted_.resize(sorted_.size());

  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();

    const auto s_begin = static_cast<std::ptrdiff_t>(frame.s_begin);
    const auto s_end = static_cast<std::ptrdiff_t>(frame.s_end);
    for (std::size_t j = 0; j < sorted_.size(); ++j) {
      context.sorted_[j] = std::span<const RowIndex>(
          sorted_[j].data() + s_begin, static_cast<std::size_t>(s_end - s_begin));
    }
    context.estimation_ = std::span<const RowIndex>(
        estimation_.data() + frame.e_begin, frame.e_end - frame.e_begin);
    context.depth = frame.depth;
    context.structure_counts = ClassCounts(k);
    if (!sorted_.empty()) {
      for (RowIndex r : context.sorted_[0]) context.structure_counts.Add(data_.label(r));
    }
    context.estimation_counts = ClassCounts(k);
    for (RowIndex r : context.estimation_) context.estimation_counts.Add(data_.label(r));
    std::fill(cached_.begin(), cached_.end(), 0);

    TreeNode& node = nodes[static_cast<std::size_t>(frame.node)];
    node.depth = frame.depth;
    node.counts = context.estimation_counts;

    std::optional<SplitCandidate> split;
    const bool depth_ok = !max_depth_ || frame.depth < *max_depth_;
    if (depth_ok && context.structure_size() >= 2 && policy.WantsSplit(context)) {
      split = policy.Choose(context, rng);
    }

    std::vector<double> eta =
        LeafDistribution(context.estimation_counts, frame.parent_eta);
    if (!split) {
      node.eta = std::move(eta);
      continue;
    }

    node.feature = split->feature;
    node.threshold = split->threshold;
    std::size_t s_mid = 0;
    std::size_t e_mid = 0;
    PartitionSlices(frame, *split, s_mid, e_mid);

    const auto left_id = static_cast<std::int32_t>(nodes.size());
    node.left = left_id;
    node.right = left_id + 1;
    nodes.emplace_back();
    nodes.emplace_back();
    // `node` may dangle after emplace_back; only ids are used from here.
    stack.push_back(Frame{left_id + 1, s_mid, frame.s_end, e_mid, frame.e_end,
                          frame.depth + 1, eta});
    stack.push_back(Frame{left_id, frame.s_begin, s_mid, frame.e_begin, e_mid,
                          frame.depth + 1, std::move(eta)});
  }
  return Tree(k, std::move(nodes));
}

namespace {

// Feature and value draws from the two impurity-weighted multinomials.
class MultinomialPolicy : public SplitPolicy {
 public:
  explicit MultinomialPolicy(const TreeParams& params) : params_(params) {}

  bool WantsSplit(const NodeContext& node) const override {
    return node.estimation_size() > static_cast<std::size_t>(params_.min_leaf);
  }

  std::optional<SplitCandidate> Choose(NodeContext& node,
                                       Rng& rng) const override {
    // Features without candidates (constant on this node) are excluded
    // before normalization.
    std::vector<int> features;
    std::vector<double> best;
    for (int j = 0; j < node.num_features(); ++j) {
      const auto& candidates = node.Candidates(j);
      if (candidates.empty()) continue;
      double top = candidates.front().decrease;
      for (const SplitCandidate& c : candidates) top = std::max(top, c.decrease);
      features.push_back(j);
      best.push_back(top);
    }
    if (features.empty()) return std::nullopt;

    const std::vector<double> feature_probs =
        SelectionProbabilities(best, params_.b1);
    std::vector<std::vector<double>> value_probs(features.size());
    const auto need = static_cast<std::int64_t>(params_.min_leaf);
    const auto total = static_cast<std::int64_t>(node.estimation_size());

    // Rejection loop: odd attempts redraw the value only, even attempts
    // redraw the feature and then the value.
    std::size_t slot = SampleIndex(feature_probs, rng);
    for (int attempt = 0; attempt < params_.max_attempts; ++attempt) {
      if (attempt > 0 && attempt % 2 == 0) slot = SampleIndex(feature_probs, rng);
      const auto& candidates = node.Candidates(features[slot]);
      if (value_probs[slot].empty()) {
        std::vector<double> decreases;
        decreases.reserve(candidates.size());
        for (const SplitCandidate& c : candidates) decreases.push_back(c.decrease);
        value_probs[slot] = SelectionProbabilities(decreases, params_.b2);
      }
      const SplitCandidate& pick = candidates[SampleIndex(value_probs[slot], rng)];
      const std::int64_t left = node.EstimationLeftCount(pick.feature, pick.threshold);
      if (left >= need && total - left >= need) return pick;
    }
    return std::nullopt;
  }

 private:
  TreeParams params_;
};

}  // namespace
}  // namespace internal

Tree::Tree(int num_classes, std::vector<TreeNode> nodes)
    : num_classes_(num_classes), nodes_(std::move(nodes)) {
  if (nodes_.empty()) Fail(ErrorCode::kSchema, "tree has no nodes");
  if (num_classes_ < 1) Fail(ErrorCode::kSchema, "tree needs at least one class");
  const auto size = static_cast<std::int64_t>(nodes_.size());
  for (std::int64_t i = 0; i < size; ++i) {
    const TreeNode& node = nodes_[static_cast<std::size_t>(i)];
    if (node.is_leaf()) {
      if (node.eta.size() != static_cast<std::size_t>(num_classes_)) {
        Fail(ErrorCode::kSchema, "leaf eta has wrong length");
      }
      depth_ = std::max(depth_, node.depth);
    } else if (node.left <= i || node.right <= i || node.left >= size ||
               node.right >= size) {
      // Children after their parent rules out cycles.
      Fail(ErrorCode::kSchema, "child index out of range");
    }
  }
}

const TreeNode& Tree::Route(std::span<const double> x) const {
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    node = &nodes_[static_cast<std::size_t>(
        x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                      : node->right)];
  }
  return *node;
}

std::size_t Tree::num_leaves() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int TreeDepth(const Tree& tree) { return tree.depth(); }

Tree BuildMrfTree(const Dataset& data, std::span<const RowIndex> structure,
                  std::span<const RowIndex> estimation, const TreeParams& params,
                  Rng& rng) {
  if (structure.empty() || estimation.empty()) {
    Fail(ErrorCode::kSize, "structure and estimation sets must be nonempty");
  }
  if (params.min_leaf < 1) Fail(ErrorCode::kConfig, "min_leaf must be >= 1");
  if (params.max_depth && *params.max_depth < 0) {
    Fail(ErrorCode::kConfig, "max_depth must be >= 0");
  }
  internal::TreeGrower grower(data, structure, estimation, params.criterion,
                              params.max_depth);
  return grower.Grow(internal::MultinomialPolicy(params), rng);
}

std::vector<double> LeafDistribution(const ClassCounts& counts,
                                     std::span<const double> fallback) {
  if (counts.total() == 0) {
    if (!fallback.empty()) return {fallback.begin(), fallback.end()};
    // No parent either: uniform.
    return std::vector<double>(static_cast<std::size_t>(counts.num_classes()),
                               1.0 / counts.num_classes());
  }
  std::vector<double> eta(static_cast<std::size_t>(counts.num_classes()));
  const double total = static_cast<double>(counts.total());
  for (int c = 0; c < counts.num_classes(); ++c) {
    eta[static_cast<std::size_t>(c)] = static_cast<double>(counts[c]) / total;
  }
  return eta;
}

std::vector<double> LeafDistribution(const Dataset& data,
                                     std::span<const RowIndex> rows,
                                     std::span<const double> fallback) {
  return LeafDistribution(CountLabels(data, rows), fallback);
}

int SampleLabel(std::span<const double> eta, Concentration b3, Rng& rng) {
  if (b3.is_infinite()) {
    return static_cast<int>(std::max_element(eta.begin(), eta.end()) - eta.begin());
  }
  return static_cast<int>(SampleIndex(SoftmaxScaled(eta, b3), rng));
}

int PredictTree(const Tree& tree, std::span<const double> x, Concentration b3,
                Rng& rng) {
  return SampleLabel(tree.Route(x).eta, b3, rng);
}

namespace internal {

OrderedJson ConcentrationToJson(Concentration c) {
  if (c.is_infinite()) return "inf";
  return c.value();
}

Concentration ConcentrationFromJson(const nlohmann::json& value) {
  if (value.is_string()) return Concentration::Parse(value.get<std::string>());
  return Concentration(value.get<double>());
}

nlohmann::json ParseJson(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, what + ": " + e.what());
  }
}

OrderedJson TreeToJsonValue(const Tree& tree) {
  OrderedJson doc;
  doc["num_classes"] = tree.num_classes();
  doc["depth"] = tree.depth();
  OrderedJson nodes = OrderedJson::array();
  for (const TreeNode& n : tree.nodes()) {
    OrderedJson node;
    node["depth"] = n.depth;
    node["counts"] = std::vector<std::int64_t>(n.counts.counts().begin(),
                                               n.counts.counts().end());
    if (n.is_leaf()) {
      node["eta"] = n.eta;
    } else {
      node["feature"] = n.feature;
      node["threshold"] = n.threshold;
      node["left"] = n.left;
      node["right"] = n.right;
    }
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

Tree TreeFromJsonValue(const nlohmann::json& doc) {
  try {
    const int k = doc.at("num_classes").get<int>();
    std::vector<TreeNode> nodes;
    for (const auto& item : doc.at("nodes")) {
      TreeNode n;
      n.depth = item.at("depth").get<int>();
      n.counts = ClassCounts(item.at("counts").get<std::vector<std::int64_t>>());
      if (item.contains("feature")) {
        n.feature = item.at("feature").get<int>();
        n.threshold = item.at("threshold").get<double>();
        n.left = item.at("left").get<std::int32_t>();
        n.right = item.at("right").get<std::int32_t>();
      } else {
        n.eta = item.at("eta").get<std::vector<double>>();
        if (static_cast<int>(n.eta.size()) != k) {
          Fail(ErrorCode::kSchema, "leaf eta has wrong length");
        }
      }
      nodes.push_back(std::move(n));
    }
    for (const TreeNode& n : nodes) {
      if (n.is_leaf()) continue;
      const auto size = static_cast<std::int32_t>(nodes.size());
      if (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size) {
        Fail(ErrorCode::kSchema, "child index out of range");
      }
    }
    return Tree(k, std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("tree document: ") + e.what());
  }
}

}  // namespace internal

std::string TreeToJson(const Tree& tree) {
  internal::OrderedJson doc;
  doc["format"] = "mrf-tree";
  doc["version"] = 1;
  doc["tree"] = internal::TreeToJsonValue(tree);
  return doc.dump();
}

Tree TreeFromJson(const std::string& text) {
  const nlohmann::json doc = internal::ParseJson(text, "tree document");
  if (doc.value("format", "") != "mrf-tree" || doc.value("version", 0) != 1) {
    Fail(ErrorCode::kSchema, "not a version-1 tree document");
  }
  return internal::TreeFromJsonValue(doc.at("tree"));
}

}  // namespace mrf
