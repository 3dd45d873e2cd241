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

#ifndef MRF_SPLIT_SELECTION_H_
#define MRF_SPLIT_SELECTION_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrf/random.h"

namespace mrf {

// Scale B of an exponential-mechanism choice: probabilities proportional to
// exp(B/2 * score). Infinity is a distinguished value meaning "uniform over
// the argmax set", not a large float.
class Concentration {
 public:
  constexpr Concentration() = default;
  // Throws DomainError unless value is finite and >= 0.
  explicit Concentration(double value);

  static constexpr Concentration Infinite() {
    Concentration c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const { return infinite_; }
  // Only meaningful when finite.
  double value() const { return value_; }

  // "inf" / "infinity" or a nonnegative decimal number.
  static Concentration Parse(const std::string& text);
  std::string ToString() const;

  bool operator==(const Concentration&) const = default;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// (v - min) / (max - min); all zeros when max == min.
std::vector<double> Normalize(std::span<const double> values);

// softmax(B/2 * x) with max subtraction. Infinite B gives the uniform
// distribution over the entries equal to the maximum.
std::vector<double> SoftmaxScaled(std::span<const double> normalized,
                                  Concentration scale);

// Inverse-CDF draw. Entries with zero probability are never returned.
std::size_t SampleIndex(std::span<const double> probabilities, Rng& rng);

// normalize -> softmax_scaled. The selection distribution over choices
// scored by raw impurity decreases.
std::vector<double> SelectionProbabilities(std::span<const double> scores,
                                           Concentration scale);

// Split-feature draw over per-feature best decreases. NoChoices when empty.
std::size_t SelectFeature(std::span<const double> best_per_feature,
                          Concentration b1, Rng& rng);

// Split-value draw over one feature's candidate decreases.
std::size_t SelectValue(std::span<const double> decreases, Concentration b2,
                        Rng& rng);

// Lower and upper bounds on any feature's selection probability:
// (1 / (1 + (D-1) e^B1), e^B1 / (e^B1 + D - 1)).
std::pair<double, double> FeatureProbabilityBounds(int num_features, double b1);

// ((N - 2) / N) e^{-2 B2}: lower bound on the probability that a split value
// avoids the two outer cells of an N-cell equal partition. DomainError for
// N < 3.
double ValueRegionBound(int num_cells, double b2);

}  // namespace mrf

#endif  // MRF_SPLIT_SELECTION_H_
