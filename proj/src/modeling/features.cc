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

#include "modeling/features.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "common/error.h"
#include "common/text.h"

namespace mealab {

double SparseVector::Norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

SparseVector SparseVector::FromDense(const std::vector<double>& dense) {
  SparseVector out;
  for (size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      out.indices.push_back(static_cast<uint32_t>(i));
      out.values.push_back(dense[i]);
    }
  }
  return out;
}

void EncoderConfig::Validate() const {
  if (hash_dim == 0 || hash_dim > (1ULL << 31)) {
    Fail(ErrorCode::kConfig, "encoder: hash_dim must be in [1, 2^31]");
  }
  if (hidden_dims.empty()) {
    Fail(ErrorCode::kConfig, "encoder: hidden_dims must be non-empty");
  }
  for (size_t w : hidden_dims) {
    if (w == 0) Fail(ErrorCode::kConfig, "encoder: hidden widths must be > 0");
  }
  if (ngram_orders.empty()) {
    Fail(ErrorCode::kConfig, "encoder: ngram_orders must be non-empty");
  }
  for (int n : ngram_orders) {
    if (n < 1) Fail(ErrorCode::kConfig, "encoder: n-gram orders must be >= 1");
  }
}

SparseVector Featurize(std::string_view text, const EncoderConfig& cfg) {
  const auto tokens = Tokenize(text);
  std::map<uint32_t, double> counts;
  for (int n : cfg.ngram_orders) {
    if (tokens.size() < static_cast<size_t>(n)) continue;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
      const uint64_t h = HashString(Join(tokens, i, i + n), cfg.hash_seed);
      const auto index = static_cast<uint32_t>(h % cfg.hash_dim);
      counts[index] += (h >> 63) ? -1.0 : 1.0;
    }
  }
  SparseVector out;
  for (const auto& [index, value] : counts) {
    if (value != 0.0) {
      out.indices.push_back(index);
      out.values.push_back(value);
    }
  }
  return out;
}

}  // namespace mealab
