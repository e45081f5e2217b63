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

#ifndef MEALAB_CORPUS_SYNTHETIC_H_
#define MEALAB_CORPUS_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "corpus/dataset.h"

namespace mealab {

// A binary sensitive attribute. `lambda` is the attribute's signal strength:
// it multiplies the sampling weight of the value's own token block by
// exp(lambda) and shifts the label log-odds toward the value's preferred
// classes by lambda * label_coupling. With lambda = 0 the attribute is
// independent of both the text and the label.
struct AttributeSpec {
  std::string name;
  double p = 0.5;  // P(value = 1)
  double lambda = 0.0;
  size_t block_size = 20;
  double label_coupling = 1.0;
};

// Vocabulary layout (token ids):
//   [0, K * label_block_size)                 class blocks, one per class
//   next 2 * block_size per attribute          value-0 block, value-1 block
//   remainder                                  background
// Canonical token id t is spelled "w<t>". A non-empty `domain` renames the
// tail of every block: the first round(overlap * block length) tokens keep
// their canonical spelling, the rest become "<domain>_w<t>". This is how
// cross-domain corpora with partially disjoint vocabularies are produced.
struct SynthConfig {
  size_t vocab_size = 2000;
  int num_classes = 4;
  size_t label_block_size = 25;
  double lambda_label = 2.5;
  std::vector<AttributeSpec> attributes;
  size_t min_length = 20;
  size_t max_length = 60;
  size_t num_docs = 1000;
  uint64_t seed = 1;
  std::string domain;
  double topic_overlap = 1.0;
  double background_overlap = 1.0;

  // Throws kConfig on invalid values or a vocabulary too small to hold the
  // disjoint blocks.
  void Validate() const;
};

// Classes preferred by `value` of the attribute at `attribute_index`: bit
// (attribute_index mod ceil(log2 K)) of the class id equals `value`.
std::vector<int> PreferredClasses(int num_classes, size_t attribute_index,
                                  int value);

Dataset GenerateSynthetic(const SynthConfig& cfg);

}  // namespace mealab

#endif  // MEALAB_CORPUS_SYNTHETIC_H_
