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

#ifndef MEALAB_VICTIM_DEFENSE_H_
#define MEALAB_VICTIM_DEFENSE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "modeling/model.h"

namespace mealab {

enum class DefenseMode { kNone, kSoften, kPerturb };

// Victim-side output transform.
//   none:    softmax(z)
//   soften:  softmax(z / tau); tau == 0 returns the hard label argmax(z)
//   perturb: normalize(softmax(z) + n), n ~ N(0, sigma^2 I)
// normalize clamps negative entries to 0 and divides by the sum, falling
// back to uniform when everything was clamped.
struct DefenseConfig {
  DefenseMode mode = DefenseMode::kNone;
  double tau = 1.0;
  double sigma = 0.0;
  uint64_t noise_seed = 0;

  // Throws kConfig for negative tau or sigma.
  void Validate() const;
  bool hard_label() const { return mode == DefenseMode::kSoften && tau == 0.0; }
  // Compact label used in reports and the CLI: "none", "soften:0.5",
  // "perturb:0.2:7".
  std::string ToString() const;
  static DefenseConfig Parse(const std::string& spec);

  bool operator==(const DefenseConfig&) const = default;
};

const char* DefenseModeName(DefenseMode mode);

// Exactly one of posterior / hard_label is set.
struct DefendedOutput {
  std::optional<Posterior> posterior;
  std::optional<int> hard_label;
};

// `request_index` keys the perturbation noise; the same (noise_seed,
// request_index) always yields the same draw.
DefendedOutput ApplyDefense(std::span<const double> logits,
                            const DefenseConfig& defense,
                            uint64_t request_index);

// Variant for callers that hold only a posterior; log(y) stands in for the
// logits (equal up to an additive constant, which softmax ignores).
DefendedOutput ApplyDefenseToPosterior(const Posterior& y,
                                       const DefenseConfig& defense,
                                       uint64_t request_index);

}  // namespace mealab

#endif  // MEALAB_VICTIM_DEFENSE_H_
