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

#include "common/random.h"

#include <cmath>
#include <numbers>

namespace mealab {

uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t base, uint64_t tag) {
  return Mix64(Mix64(base) ^ (tag * 0xd1b54a32d192ed03ULL));
}

namespace {

double ToUnit(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double BoxMuller(double u1, double u2) {
  // u1 in (0, 1] keeps the log finite.
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double Rng::Uniform() { return ToUnit(engine_()); }

uint64_t Rng::UniformInt(uint64_t n) {
  // Rejection sampling over the largest multiple of n.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Normal() {
  double u1 = 1.0 - Uniform();
  double u2 = Uniform();
  return BoxMuller(u1, u2);
}

double CounterNormal(uint64_t key, uint64_t counter, uint64_t lane) {
  uint64_t base = DeriveSeed(DeriveSeed(key, counter), lane);
  double u1 = 1.0 - ToUnit(Mix64(base));
  double u2 = ToUnit(Mix64(base ^ 0x5851f42d4c957f2dULL));
  return BoxMuller(u1, u2);
}

}  // namespace mealab
