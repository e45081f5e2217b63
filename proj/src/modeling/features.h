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

#ifndef MEALAB_MODELING_FEATURES_H_
#define MEALAB_MODELING_FEATURES_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace mealab {

// Sorted by index, no duplicate indices, no explicit zeros.
struct SparseVector {
  std::vector<uint32_t> indices;
  std::vector<double> values;

  size_t nnz() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  double Norm() const;

  static SparseVector FromDense(const std::vector<double>& dense);

  bool operator==(const SparseVector&) const = default;
};

struct EncoderConfig {
  size_t hash_dim = 4096;
  std::vector<size_t> hidden_dims{64};
  uint64_t hash_seed = 0;
  std::vector<int> ngram_orders{1, 2};

  size_t repr_dim() const { return hidden_dims.empty() ? 0 : hidden_dims.back(); }
  // Throws kConfig.
  void Validate() const;

  bool operator==(const EncoderConfig&) const = default;
};

// Hashed bag of n-grams with signed-hash collision handling: each n-gram adds
// +1 or -1 at bucket hash % hash_dim, the sign taken from the top hash bit.
SparseVector Featurize(std::string_view text, const EncoderConfig& cfg);

}  // namespace mealab

#endif  // MEALAB_MODELING_FEATURES_H_
