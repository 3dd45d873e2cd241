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

#ifndef MRF_RANDOM_H_
#define MRF_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace mrf {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed and a stream counter.
std::uint64_t MixSeed(std::uint64_t value);

// Seed for stream `stream` under `master`. Depends only on the two values,
// never on scheduling order.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

// Seeded random stream with platform-independent draws. The standard
// distributions are implementation-defined, so uniform doubles, bounded
// integers and shuffles are implemented here on top of mt19937_64, whose
// output sequence is fixed by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Stream `stream` of master seed `master`.
  static Rng ForStream(std::uint64_t master, std::uint64_t stream) {
    return Rng(DeriveSeed(master, stream));
  }

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t UniformInt(std::uint64_t bound);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mrf

#endif  // MRF_RANDOM_H_
