// Copyright 2026 The MEALab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEALAB_COMMON_RANDOM_H_
#define MEALAB_COMMON_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace mealab {

// Finalizer from SplitMix64; a bijection on 64-bit words.
uint64_t Mix64(uint64_t x);

// Combines a base seed with a stream tag into an independent seed.
uint64_t DeriveSeed(uint64_t base, uint64_t tag);

// Seeded, platform-stable random source. The std distributions are
// implementation-defined, so every draw used by the lab goes through here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(Mix64(seed)) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Counter-based standard normal: a pure function of (key, counter, lane).
// Used where draws must be reproducible regardless of call order.
double CounterNormal(uint64_t key, uint64_t counter, uint64_t lane);

}  // namespace mealab

#endif  // MEALAB_COMMON_RANDOM_H_
