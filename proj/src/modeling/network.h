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

#ifndef MEALAB_MODELING_NETWORK_H_
#define MEALAB_MODELING_NETWORK_H_

#include <cstdint>
#include <span>
#include <vector>

#include "modeling/features.h"

namespace mealab {

// Fully connected layer. Weights are stored input-major (row i holds the
// fan-out of input unit i) so a sparse input touches only its own rows.
struct Layer {
  size_t in = 0;
  size_t out = 0;
  std::vector<double> weights;  // in * out
  std::vector<double> bias;     // out

  Layer() = default;
  Layer(size_t in_width, size_t out_width)
      : in(in_width), out(out_width), weights(in_width * out_width, 0.0),
        bias(out_width, 0.0) {}

  double* row(size_t i) { return weights.data() + i * out; }
  const double* row(size_t i) const { return weights.data() + i * out; }

  bool operator==(const Layer&) const = default;
};

// Per-layer gradient buffers with touched-row tracking, so clearing after a
// sparse mini-batch costs O(rows touched) rather than O(in * out).
class Gradient {
 public:
  explicit Gradient(const std::vector<Layer>& shape);

  Layer& layer(size_t l) { return layers_[l]; }
  const Layer& layer(size_t l) const { return layers_[l]; }
  const std::vector<uint32_t>& touched_rows(size_t l) const { return rows_[l]; }
  void MarkRow(size_t l, uint32_t row);
  void Clear();

 private:
  std::vector<Layer> layers_;
  std::vector<std::vector<uint32_t>> rows_;
  std::vector<std::vector<char>> marked_;
};

// tanh hidden layers followed by a linear output layer. The output of the
// second-to-last layer is the representation the last layer consumes.
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<Layer> layers);

  // widths = {input, hidden..., output}. Hidden layers are Glorot-uniform,
  // except that with `unit_norm_input` the first layer is drawn with unit
  // standard deviation (its input is a unit-norm sparse vector). The output
  // layer starts at zero.
  static Network Random(const std::vector<size_t>& widths, uint64_t seed,
                        bool unit_norm_input = true);

  size_t num_layers() const { return layers_.size(); }
  size_t input_width() const { return layers_.front().in; }
  size_t output_width() const { return layers_.back().out; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }

  // activations[l] is the output of layer l (post-tanh for hidden layers,
  // raw logits for the last).
  using Activations = std::vector<std::vector<double>>;
  void Forward(const SparseVector& x, Activations& acts) const;
  std::vector<double> Logits(const SparseVector& x) const;
  std::vector<double> Representation(const SparseVector& x) const;
  std::vector<double> HeadLogits(std::span<const double> representation) const;

  // Adds d/dparams of H(target, softmax(logits(x))) into `grad` for layers
  // >= first_trainable and returns the loss.
  double Backprop(const SparseVector& x, std::span<const double> target,
                  size_t first_trainable, Gradient& grad) const;

  bool operator==(const Network&) const = default;

 private:
  std::vector<Layer> layers_;
};

std::vector<double> Softmax(std::span<const double> logits);
// Cross-entropy H(target, softmax(logits)) computed stably via log-sum-exp.
double CrossEntropyWithLogits(std::span<const double> target,
                              std::span<const double> logits);

}  // namespace mealab

#endif  // MEALAB_MODELING_NETWORK_H_
