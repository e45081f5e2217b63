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

#include "modeling/network.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"
#include "common/random.h"

namespace mealab {

Gradient::Gradient(const std::vector<Layer>& shape) {
  for (const Layer& l : shape) {
    layers_.emplace_back(l.in, l.out);
    rows_.emplace_back();
    marked_.emplace_back(l.in, 0);
  }
}

void Gradient::MarkRow(size_t l, uint32_t row) {
  if (!marked_[l][row]) {
    marked_[l][row] = 1;
    rows_[l].push_back(row);
  }
}

void Gradient::Clear() {
  for (size_t l = 0; l < layers_.size(); ++l) {
    Layer& g = layers_[l];
    for (uint32_t r : rows_[l]) {
      std::fill_n(g.row(r), g.out, 0.0);
      marked_[l][r] = 0;
    }
    rows_[l].clear();
    std::fill(g.bias.begin(), g.bias.end(), 0.0);
  }
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) Fail(ErrorCode::kInvalidArgument, "network has no layers");
  for (size_t l = 1; l < layers_.size(); ++l) {
    if (layers_[l].in != layers_[l - 1].out) {
      Fail(ErrorCode::kInvalidArgument, "network layer widths do not chain");
    }
  }
}

Network Network::Random(const std::vector<size_t>& widths, uint64_t seed,
                        bool unit_norm_input) {
  if (widths.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "network needs at least two widths");
  }
  Rng rng(seed);
  std::vector<Layer> layers;
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer(widths[l], widths[l + 1]);
    const bool is_output = l + 2 == widths.size();
    if (!is_output) {
      const double scale =
          l == 0 && unit_norm_input
                 ? std::sqrt(3.0)
                 : std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
      for (double& w : layer.weights) w = (2.0 * rng.Uniform() - 1.0) * scale;
    }
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

namespace {

// out = tanh?(W^T x + b) for a sparse input.
void LayerForwardSparse(const Layer& layer, const SparseVector& x,
                        std::vector<double>& out) {
  out.assign(layer.bias.begin(), layer.bias.end());
  for (size_t k = 0; k < x.nnz(); ++k) {
    const double v = x.values[k];
    const double* w = layer.row(x.indices[k]);
    for (size_t o = 0; o < layer.out; ++o) out[o] += v * w[o];
  }
}

void LayerForwardDense(const Layer& layer, std::span<const double> x,
                       std::vector<double>& out) {
  out.assign(layer.bias.begin(), layer.bias.end());
  for (size_t i = 0; i < layer.in; ++i) {
    const double v = x[i];
    if (v == 0.0) continue;
    const double* w = layer.row(i);
    for (size_t o = 0; o < layer.out; ++o) out[o] += v * w[o];
  }
}

void Tanh(std::vector<double>& v) {
  for (double& x : v) x = std::tanh(x);
}

}  // namespace

void Network::Forward(const SparseVector& x, Activations& acts) const {
  if (!x.empty() && x.indices.back() >= input_width()) {
    Fail(ErrorCode::kInvalidArgument, "input index exceeds network input width");
  }
  acts.resize(layers_.size());
  for (size_t l = 0; l < layers_.size(); ++l) {
    if (l == 0) {
      LayerForwardSparse(layers_[0], x, acts[0]);
    } else {
      LayerForwardDense(layers_[l], acts[l - 1], acts[l]);
    }
    if (l + 1 < layers_.size()) Tanh(acts[l]);
  }
}

std::vector<double> Network::Logits(const SparseVector& x) const {
  Activations acts;
  Forward(x, acts);
  return std::move(acts.back());
}

std::vector<double> Network::Representation(const SparseVector& x) const {
  if (layers_.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "network has no representation layer");
  }
  Activations acts;
  Forward(x, acts);
  return std::move(acts[acts.size() - 2]);
}

std::vector<double> Network::HeadLogits(
    std::span<const double> representation) const {
  const Layer& head = layers_.back();
  if (representation.size() != head.in) {
    Fail(ErrorCode::kInvalidArgument, "representation width mismatch");
  }
  std::vector<double> out;
  LayerForwardDense(head, representation, out);
  return out;
}

double Network::Backprop(const SparseVector& x, std::span<const double> target,
                         size_t first_trainable, Gradient& grad) const {
  Activations acts;
  Forward(x, acts);
  const std::vector<double>& logits = acts.back();
  const double loss = CrossEntropyWithLogits(target, logits);

  // dL/dlogits = p * sum(t) - t; sum(t) = 1 for posteriors.
  double target_mass = 0.0;
  for (double t : target) target_mass += t;
  std::vector<double> delta = Softmax(logits);
  for (size_t k = 0; k < delta.size(); ++k) {
    delta[k] = delta[k] * target_mass - target[k];
  }

  for (size_t l = layers_.size(); l-- > first_trainable;) {
    const Layer& layer = layers_[l];
    Layer& g = grad.layer(l);
    for (size_t o = 0; o < layer.out; ++o) g.bias[o] += delta[o];
    if (l == 0) {
      for (size_t k = 0; k < x.nnz(); ++k) {
        const uint32_t i = x.indices[k];
        grad.MarkRow(0, i);
        double* gw = g.row(i);
        const double v = x.values[k];
        for (size_t o = 0; o < layer.out; ++o) gw[o] += v * delta[o];
      }
      break;
    }
    const std::vector<double>& input = acts[l - 1];
    std::vector<double> prev(layer.in, 0.0);
    for (size_t i = 0; i < layer.in; ++i) {
      grad.MarkRow(l, static_cast<uint32_t>(i));
      double* gw = g.row(i);
      const double* w = layer.row(i);
      double back = 0.0;
      for (size_t o = 0; o < layer.out; ++o) {
        gw[o] += input[i] * delta[o];
        back += w[o] * delta[o];
      }
      // input[i] is tanh output of layer l-1.
      prev[i] = back * (1.0 - input[i] * input[i]);
    }
    if (l == first_trainable) break;
    delta = std::move(prev);
  }
  return loss;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double max = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - max);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

double CrossEntropyWithLogits(std::span<const double> target,
                              std::span<const double> logits) {
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - max);
  const double log_norm = max + std::log(sum);
  double loss = 0.0;
  for (size_t k = 0; k < logits.size(); ++k) {
    if (target[k] != 0.0) loss -= target[k] * (logits[k] - log_norm);
  }
  return loss;
}

}  // namespace mealab
