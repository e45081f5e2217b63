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

#include "victim/defense.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "common/error.h"
#include "common/random.h"
#include "modeling/network.h"

namespace mealab {

void DefenseConfig::Validate() const {
  if (!(tau >= 0.0)) Fail(ErrorCode::kConfig, "defense: tau must be >= 0");
  if (!(sigma >= 0.0)) Fail(ErrorCode::kConfig, "defense: sigma must be >= 0");
}

const char* DefenseModeName(DefenseMode mode) {
  switch (mode) {
    case DefenseMode::kNone:
      return "none";
    case DefenseMode::kSoften:
      return "soften";
    case DefenseMode::kPerturb:
      return "perturb";
  }
  return "unknown";
}

std::string DefenseConfig::ToString() const {
  std::ostringstream out;
  out << DefenseModeName(mode);
  if (mode == DefenseMode::kSoften) out << ':' << tau;
  if (mode == DefenseMode::kPerturb) out << ':' << sigma << ':' << noise_seed;
  return out.str();
}

DefenseConfig DefenseConfig::Parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  auto number = [&](size_t i) {
    try {
      size_t used = 0;
      double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      Fail(ErrorCode::kConfig, "defense: cannot parse '" + spec + "'");
    }
  };
  DefenseConfig d;
  if (parts.size() == 1 && parts[0] == "none") {
    d.mode = DefenseMode::kNone;
  } else if (parts.size() == 2 && parts[0] == "soften") {
    d.mode = DefenseMode::kSoften;
    d.tau = number(1);
  } else if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "perturb") {
    d.mode = DefenseMode::kPerturb;
    d.sigma = number(1);
    if (parts.size() == 3) {
      try {
        d.noise_seed = std::stoull(parts[2]);
      } catch (const std::exception&) {
        Fail(ErrorCode::kConfig, "defense: bad noise seed in '" + spec + "'");
      }
    }
  } else {
    Fail(ErrorCode::kConfig,
         "defense: expected none | soften:TAU | perturb:SIGMA[:SEED], got '" +
             spec + "'");
  }
  d.Validate();
  return d;
}

namespace {

int ArgmaxOf(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

Posterior ClampNormalize(std::vector<double> v);

DefendedOutput Perturb(std::vector<double> y, const DefenseConfig& defense,
                       uint64_t request_index) {
  if (defense.sigma == 0.0) return {Posterior{std::move(y)}, std::nullopt};
  for (size_t k = 0; k < y.size(); ++k) {
    y[k] += defense.sigma * CounterNormal(defense.noise_seed, request_index, k);
  }
  return {ClampNormalize(std::move(y)), std::nullopt};
}

Posterior ClampNormalize(std::vector<double> v) {
  double sum = 0.0;
  for (double& x : v) {
    if (!(x > 0.0)) x = 0.0;
    sum += x;
  }
  if (!(sum > 0.0)) return Posterior::Uniform(v.size());
  for (double& x : v) x /= sum;
  return Posterior{std::move(v)};
}

}  // namespace

DefendedOutput ApplyDefense(std::span<const double> logits,
                            const DefenseConfig& defense,
                            uint64_t request_index) {
  defense.Validate();
  if (logits.empty()) Fail(ErrorCode::kInvalidArgument, "empty logits");
  DefendedOutput out;
  switch (defense.mode) {
    case DefenseMode::kNone:
      out.posterior = Posterior{Softmax(logits)};
      break;
    case DefenseMode::kSoften: {
      if (defense.tau == 0.0) {
        out.hard_label = ArgmaxOf(logits);
        break;
      }
      std::vector<double> scaled(logits.begin(), logits.end());
      for (double& z : scaled) z /= defense.tau;
      out.posterior = Posterior{Softmax(scaled)};
      break;
    }
    case DefenseMode::kPerturb:
      out = Perturb(Softmax(logits), defense, request_index);
      break;
  }
  return out;
}

DefendedOutput ApplyDefenseToPosterior(const Posterior& y,
                                       const DefenseConfig& defense,
                                       uint64_t request_index) {
  if (!y.IsValid()) Fail(ErrorCode::kInvalidArgument, "invalid posterior");
  defense.Validate();
  if (defense.mode == DefenseMode::kNone) return {y, std::nullopt};
  if (defense.mode == DefenseMode::kPerturb) {
    return Perturb(y.probs, defense, request_index);
  }
  std::vector<double> logits(y.probs.size());
  for (size_t k = 0; k < logits.size(); ++k) {
    logits[k] = y.probs[k] > 0.0 ? std::log(y.probs[k])
                                 : std::numeric_limits<double>::lowest() / 4;
  }
  return ApplyDefense(logits, defense, request_index);
}

}  // namespace mealab
