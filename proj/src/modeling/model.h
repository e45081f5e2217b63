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

#ifndef MEALAB_MODELING_MODEL_H_
#define MEALAB_MODELING_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modeling/features.h"
#include "modeling/network.h"

namespace mealab {

// K-dimensional probability vector as returned by a prediction API.
struct Posterior {
  std::vector<double> probs;

  size_t num_classes() const { return probs.size(); }
  // Lowest index among ties.
  int Argmax() const;
  double Max() const;
  // Entries in [0, 1] summing to 1 within `tolerance`.
  bool IsValid(double tolerance = 1e-6) const;

  static Posterior OneHot(int label, size_t num_classes);
  static Posterior Uniform(size_t num_classes);

  bool operator==(const Posterior&) const = default;
};

// Shared encoder plus a linear task head. Immutable once built; all query
// methods are const and safe to call concurrently.
class Model {
 public:
  Model() = default;
  Model(EncoderConfig cfg, int num_classes, Network network);

  // Random encoder (seeded) with an all-zero head.
  static Model Create(const EncoderConfig& cfg, int num_classes, uint64_t seed);
  // Takes the given encoder layers (e.g. pretrained) and adds a zero head.
  static Model FromEncoder(const EncoderConfig& cfg,
                           std::vector<Layer> encoder_layers, int num_classes);

  const EncoderConfig& config() const { return config_; }
  int num_classes() const { return num_classes_; }
  size_t repr_dim() const { return config_.repr_dim(); }
  const Network& network() const { return network_; }
  Network& mutable_network() { return network_; }
  // Copies of all layers except the head.
  std::vector<Layer> EncoderLayers() const;

  // Featurizes and scales to unit L2 norm; the network's input.
  SparseVector Encode(std::string_view text) const;

  std::vector<double> Logits(std::string_view text) const;
  Posterior Predict(std::string_view text) const;
  // Final encoder layer output (post-tanh), the tensor the head consumes.
  std::vector<double> Representation(std::string_view text) const;
  std::vector<double> LogitsFromRepresentation(std::span<const double> h) const;

  // Versioned little-endian binary dump; Deserialize(Serialize()) is exact.
  std::string Serialize() const;
  static Model Deserialize(std::string_view bytes);
  void Save(const std::string& path) const;
  static Model Load(const std::string& path);

  bool operator==(const Model&) const = default;

 private:
  EncoderConfig config_;
  int num_classes_ = 0;
  Network network_;
};

}  // namespace mealab

#endif  // MEALAB_MODELING_MODEL_H_
