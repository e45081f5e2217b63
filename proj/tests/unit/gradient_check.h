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

#ifndef MEALAB_TESTS_UNIT_GRADIENT_CHECK_H_
#define MEALAB_TESTS_UNIT_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "common/random.h"
#include "modeling/features.h"
#include "modeling/network.h"

namespace mealab::testing {

struct GradientCheckResult {
  double max_relative_error = 0.0;
  size_t parameters = 0;
};

// Compares Network::Backprop summed over a micro-batch with central
// differences of the summed cross-entropy, for every parameter.
inline GradientCheckResult CheckGradients(
    const Network& net, const std::vector<SparseVector>& inputs,
    const std::vector<std::vector<double>>& targets, double step = 1e-5) {
  Gradient grad(net.layers());
  for (size_t i = 0; i < inputs.size(); ++i) {
    net.Backprop(inputs[i], targets[i], 0, grad);
  }
  auto batch_loss = [&](const Network& n) {
    double loss = 0.0;
    for (size_t i = 0; i < inputs.size(); ++i) {
      loss += CrossEntropyWithLogits(targets[i], n.Logits(inputs[i]));
    }
    return loss;
  };

  GradientCheckResult result;
  Network probe = net;
  auto check = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + step;
    const double up = batch_loss(probe);
    param = saved - step;
    const double down = batch_loss(probe);
    param = saved;
    const double numeric = (up - down) / (2.0 * step);
    // Relative error, guarded for parameters whose gradient is ~0.
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-4});
    result.max_relative_error =
        std::max(result.max_relative_error, std::abs(analytic - numeric) / scale);
    ++result.parameters;
  };
  for (size_t l = 0; l < probe.num_layers(); ++l) {
    Layer& layer = probe.mutable_layers()[l];
    const Layer& g = grad.layer(l);
    for (size_t j = 0; j < layer.weights.size(); ++j) {
      check(layer.weights[j], g.weights[j]);
    }
    for (size_t j = 0; j < layer.bias.size(); ++j) check(layer.bias[j], g.bias[j]);
  }
  return result;
}

// A small network with a non-zero head, so every layer receives gradient.
inline Network GradientCheckNetwork(const std::vector<size_t>& widths,
                                    uint64_t seed) {
  Network net = Network::Random(widths, seed);
  Rng rng(DeriveSeed(seed, 1));
  for (double& w : net.mutable_layers().back().weights) {
    w = rng.Uniform() * 2.0 - 1.0;
  }
  for (double& b : net.mutable_layers().back().bias) b = rng.Uniform() - 0.5;
  return net;
}

}  // namespace mealab::testing

#endif  // MEALAB_TESTS_UNIT_GRADIENT_CHECK_H_
