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

#ifndef MEALAB_AIA_INFERENCE_H_
#define MEALAB_AIA_INFERENCE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/dataset.h"
#include "modeling/model.h"
#include "modeling/network.h"
#include "modeling/trainer.h"

namespace mealab {

enum class AttributeKind { kDemographic, kEntity };

const char* AttributeKindName(AttributeKind kind);
AttributeKind ParseAttributeKind(const std::string& name);

struct AttributeTarget {
  std::string name;
  AttributeKind kind = AttributeKind::kDemographic;
};

struct RepresentationPair {
  std::vector<double> h;
  std::vector<int> values;  // aligned with the requested attribute list
};

// h = model.Representation(text) for every aux document, paired with the
// document's values for `attributes`. Throws kValidation for undeclared
// attributes or a document with an unknown value (naming the document).
std::vector<RepresentationPair> CollectRepresentations(
    const Model& model, const Dataset& aux,
    const std::vector<std::string>& attributes);

// Feed-forward attack model: h -> tanh hidden -> softmax over {0, 1}.
struct InferenceModel {
  std::string attribute;
  Network network;

  size_t input_width() const { return network.input_width(); }
};

inline constexpr size_t kInferenceHiddenWidth = 64;

// Trains on pairs[i].values[attribute_index]. Values must be binary and each
// must occur at least twice, else kDegenerateData.
InferenceModel TrainInference(std::span<const RepresentationPair> pairs,
                              size_t attribute_index,
                              const std::string& attribute,
                              const TrainConfig& tc,
                              size_t hidden_width = kInferenceHiddenWidth);

struct Inference {
  int value = 0;
  double confidence = 0.0;  // probability of `value`
};

Inference InferFromRepresentation(const InferenceModel& f,
                                  std::span<const double> h);
// Throws kValidation when f's input width differs from g's repr_dim.
Inference Infer(const InferenceModel& f, const Model& g, std::string_view text);
std::vector<Inference> InferBatch(const InferenceModel& f, const Model& g,
                                  std::span<const std::string> texts);

struct PrivacyScore {
  double privacy = 1.0;
  double attack_score = 0.0;  // accuracy (demographic) or F1 (entity)
  bool degenerate = false;    // F1 undefined: no positives anywhere
};

// demographic: 1 - accuracy; entity: 1 - F1 on the "present" (1) class.
// Throws kValidation on empty or misaligned input.
PrivacyScore EmpiricalPrivacy(std::span<const int> predictions,
                              std::span<const int> truths, AttributeKind kind);

struct AttributePrivacy {
  std::string name;
  AttributeKind kind = AttributeKind::kDemographic;
  PrivacyScore extracted;
  PrivacyScore plain_encoder;
  PrivacyScore majority;
  int majority_value = 0;
  double attribute_std = 0.0;
};

struct AggregatePrivacy {
  double extracted = 1.0;
  double plain_encoder = 1.0;
  double majority = 1.0;
};

// Evaluation records grouped by the extracted model's maximum posterior
// probability on them.
struct PrivacyBin {
  double lower = 0.0;
  double upper = 0.0;
  size_t records = 0;
  double privacy = 0.0;  // NaN when the bin is empty or the score undefined
};

struct PrivacyReport {
  std::vector<AttributePrivacy> attributes;
  // Extracted-model privacy of the headline kind, per max-posterior bin.
  std::vector<PrivacyBin> sharpness_bins;
  // 1 - mean accuracy over demographic attributes.
  std::optional<AggregatePrivacy> demographic;
  // 1 - micro-averaged F1 pooled over entity attributes.
  std::optional<AggregatePrivacy> entity;

  // Demographic aggregate when present, else entity, else all NaN.
  AggregatePrivacy headline() const;
};

// Trains one inference model per attribute on aux representations of the
// extracted model, evaluates on `eval` (the victim's training records), and
// computes the majority-value and plain-encoder baselines.
PrivacyReport RunAia(const Model& extracted, const Model& plain_encoder,
                     const Dataset& aux, const Dataset& eval,
                     const std::vector<AttributeTarget>& attributes,
                     const TrainConfig& tc, size_t num_bins = 10);

}  // namespace mealab

#endif  // MEALAB_AIA_INFERENCE_H_
