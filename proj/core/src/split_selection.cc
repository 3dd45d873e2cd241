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

#include "mrf/split_selection.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "mrf/error.h"

namespace mrf {

Concentration::Concentration(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    Fail(ErrorCode::kDomain, "concentration must be finite and >= 0");
  }
}

Concentration Concentration::Parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") {
    return Infinite();
  }
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    Fail(ErrorCode::kConfig, "not a concentration value: '" + text + "'");
  }
  if (std::isinf(value) && value > 0) return Infinite();
  if (!std::isfinite(value) || value < 0.0) {
    Fail(ErrorCode::kConfig, "concentration must be >= 0: '" + text + "'");
  }
  return Concentration(value);
}

std::string Concentration::ToString() const {
  if (infinite_) return "inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value_);
  return std::string(buffer, ptr);
}

std::vector<double> Normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - min;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - min) / range;
  }
  return out;
}

std::vector<double> SoftmaxScaled(std::span<const double> normalized,
                                  Concentration scale) {
  std::vector<double> p(normalized.size(), 0.0);
  if (normalized.empty()) return p;
  const double max = *std::max_element(normalized.begin(), normalized.end());
  if (scale.is_infinite()) {
    const auto ties = std::count(normalized.begin(), normalized.end(), max);
    const double share = 1.0 / static_cast<double>(ties);
    for (std::size_t i = 0; i < normalized.size(); ++i) {
      if (normalized[i] == max) p[i] = share;
    }
    return p;
  }
  const double half = scale.value() / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    p[i] = std::exp(half * (normalized[i] - max));
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::size_t SampleIndex(std::span<const double> probabilities, Rng& rng) {
  if (probabilities.empty()) Fail(ErrorCode::kNoChoices, "nothing to sample");
  if (probabilities.size() == 1) return 0;
  const double u = rng.Uniform01();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    cumulative += probabilities[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum just under u.
  return last_positive;
}

std::vector<double> SelectionProbabilities(std::span<const double> scores,
                                           Concentration scale) {
  return SoftmaxScaled(Normalize(scores), scale);
}

std::size_t SelectFeature(std::span<const double> best_per_feature,
                          Concentration b1, Rng& rng) {
  if (best_per_feature.empty()) {
    Fail(ErrorCode::kNoChoices, "no splittable feature");
  }
  return SampleIndex(SelectionProbabilities(best_per_feature, b1), rng);
}

std::size_t SelectValue(std::span<const double> decreases, Concentration b2,
                        Rng& rng) {
  if (decreases.empty()) Fail(ErrorCode::kNoChoices, "no candidate split value");
  return SampleIndex(SelectionProbabilities(decreases, b2), rng);
}

std::pair<double, double> FeatureProbabilityBounds(int num_features, double b1) {
  if (num_features < 1 || !(b1 >= 0.0) || !std::isfinite(b1)) {
    Fail(ErrorCode::kDomain, "need D >= 1 and finite B1 >= 0");
  }
  const double e = std::exp(b1);
  const double others = static_cast<double>(num_features - 1);
  return {1.0 / (1.0 + others * e), e / (e + others)};
}

double ValueRegionBound(int num_cells, double b2) {
  if (num_cells < 3) Fail(ErrorCode::kDomain, "need N >= 3 equal cells");
  if (!(b2 >= 0.0) || !std::isfinite(b2)) {
    Fail(ErrorCode::kDomain, "need finite B2 >= 0");
  }
  const double n = static_cast<double>(num_cells);
  return (n - 2.0) / n * std::exp(-2.0 * b2);
}

}  // namespace mrf
