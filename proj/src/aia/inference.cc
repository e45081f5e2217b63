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

#include "aia/inference.h"

#include <algorithm>
#include <array>
#include <limits>

#include "common/error.h"
#include "common/random.h"
#include "metrics/metrics.h"

namespace mealab {

const char* AttributeKindName(AttributeKind kind) {
  return kind == AttributeKind::kEntity ? "entity" : "demographic";
}

AttributeKind ParseAttributeKind(const std::string& name) {
  if (name == "demographic") return AttributeKind::kDemographic;
  if (name == "entity") return AttributeKind::kEntity;
  Fail(ErrorCode::kConfig,
       "attribute kind must be 'demographic' or 'entity', got '" + name + "'");
}

std::vector<RepresentationPair> CollectRepresentations(
    const Model& model, const Dataset& aux,
    const std::vector<std::string>& attributes) {
  for (const auto& name : attributes) {
    if (!aux.HasAttribute(name)) {
      Fail(ErrorCode::kValidation,
           "auxiliary data does not declare attribute '" + name + "'");
    }
  }
  std::vector<RepresentationPair> pairs;
  pairs.reserve(aux.size());
  for (size_t i = 0; i < aux.size(); ++i) {
    const Document& doc = aux.documents[i];
    RepresentationPair pair;
    for (const auto& name : attributes) {
      const int v = doc.attribute(name);
      if (v == kUnknownAttribute) {
        Fail(ErrorCode::kValidation, "auxiliary document " + std::to_string(i) +
                                         " has no value for '" + name + "'");
      }
      pair.values.push_back(v);
    }
    pair.h = model.Representation(doc.text);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

InferenceModel TrainInference(std::span<const RepresentationPair> pairs,
                              size_t attribute_index,
                              const std::string& attribute,
                              const TrainConfig& tc, size_t hidden_width) {
  if (pairs.empty()) {
    Fail(ErrorCode::kDegenerateData, "no training pairs for '" + attribute + "'");
  }
  std::array<size_t, 2> counts{0, 0};
  const size_t width = pairs.front().h.size();
  std::vector<TrainingExample> examples;
  examples.reserve(pairs.size());
  for (const auto& p : pairs) {
    const int v = p.values.at(attribute_index);
    if (v != 0 && v != 1) {
      Fail(ErrorCode::kDegenerateData,
           "attribute '" + attribute + "' is not binary");
    }
    if (p.h.size() != width) {
      Fail(ErrorCode::kValidation, "representations have mixed widths");
    }
    ++counts[static_cast<size_t>(v)];
    std::vector<double> target(2, 0.0);
    target[static_cast<size_t>(v)] = 1.0;
    examples.push_back({SparseVector::FromDense(p.h), std::move(target)});
  }
  if (counts[0] < 2 || counts[1] < 2) {
    Fail(ErrorCode::kDegenerateData,
         "attribute '" + attribute +
             "' needs at least two examples of each value in the aux data");
  }
  InferenceModel f;
  f.attribute = attribute;
  f.network = Network::Random({width, hidden_width, 2},
                              DeriveSeed(tc.seed, 0x617474), false);
  TrainNetwork(f.network, examples, tc);
  return f;
}

Inference InferFromRepresentation(const InferenceModel& f,
                                  std::span<const double> h) {
  if (h.size() != f.input_width()) {
    Fail(ErrorCode::kValidation, "representation width " +
                                     std::to_string(h.size()) +
                                     " does not match inference model input " +
                                     std::to_string(f.input_width()));
  }
  const auto probs = Softmax(f.network.Logits(
      SparseVector::FromDense(std::vector<double>(h.begin(), h.end()))));
  const int value = probs[1] > probs[0] ? 1 : 0;
  return {value, probs[static_cast<size_t>(value)]};
}

Inference Infer(const InferenceModel& f, const Model& g, std::string_view text) {
  if (g.repr_dim() != f.input_width()) {
    Fail(ErrorCode::kValidation,
         "inference model expects width " + std::to_string(f.input_width()) +
             ", model representation has " + std::to_string(g.repr_dim()));
  }
  return InferFromRepresentation(f, g.Representation(text));
}

std::vector<Inference> InferBatch(const InferenceModel& f, const Model& g,
                                  std::span<const std::string> texts) {
  std::vector<Inference> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(Infer(f, g, t));
  return out;
}

namespace {

struct Confusion {
  size_t tp = 0, fp = 0, fn = 0, correct = 0, total = 0;

  void Add(std::span<const int> predictions, std::span<const int> truths) {
    for (size_t i = 0; i < predictions.size(); ++i) {
      const bool p = predictions[i] == 1;
      const bool t = truths[i] == 1;
      tp += p && t;
      fp += p && !t;
      fn += !p && t;
      correct += predictions[i] == truths[i];
      ++total;
    }
  }

  PrivacyScore Score(AttributeKind kind) const {
    PrivacyScore s;
    if (kind == AttributeKind::kDemographic) {
      s.attack_score = static_cast<double>(correct) / static_cast<double>(total);
      s.privacy = 1.0 - s.attack_score;
      return s;
    }
    if (tp + fp + fn == 0) {
      s.degenerate = true;
      s.attack_score = 0.0;
      s.privacy = 1.0;
      return s;
    }
    s.attack_score = 2.0 * static_cast<double>(tp) /
                     static_cast<double>(2 * tp + fp + fn);
    s.privacy = 1.0 - s.attack_score;
    return s;
  }
};

}  // namespace

PrivacyScore EmpiricalPrivacy(std::span<const int> predictions,
                              std::span<const int> truths, AttributeKind kind) {
  if (predictions.empty() || predictions.size() != truths.size()) {
    Fail(ErrorCode::kValidation,
         "empirical privacy needs equal-length, non-empty lists");
  }
  Confusion c;
  c.Add(predictions, truths);
  return c.Score(kind);
}

AggregatePrivacy PrivacyReport::headline() const {
  if (demographic) return *demographic;
  if (entity) return *entity;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan, nan};
}

PrivacyReport RunAia(const Model& extracted, const Model& plain_encoder,
                     const Dataset& aux, const Dataset& eval,
                     const std::vector<AttributeTarget>& attributes,
                     const TrainConfig& tc, size_t num_bins) {
  if (attributes.empty()) {
    Fail(ErrorCode::kConfig, "no attributes to attack");
  }
  std::vector<std::string> names;
  for (const auto& a : attributes) names.push_back(a.name);

  const auto aux_extracted = CollectRepresentations(extracted, aux, names);
  const auto aux_plain = CollectRepresentations(plain_encoder, aux, names);
  const auto eval_extracted = CollectRepresentations(extracted, eval, names);
  const auto eval_plain = CollectRepresentations(plain_encoder, eval, names);

  if (num_bins == 0) Fail(ErrorCode::kInvalidArgument, "num_bins must be > 0");
  const bool has_demographic =
      std::any_of(attributes.begin(), attributes.end(), [](const auto& a) {
        return a.kind == AttributeKind::kDemographic;
      });
  const AttributeKind headline_kind = has_demographic
                                          ? AttributeKind::kDemographic
                                          : AttributeKind::kEntity;
  const auto k = static_cast<size_t>(extracted.num_classes());
  std::vector<size_t> record_bin;
  record_bin.reserve(eval.size());
  for (const Document& doc : eval.documents) {
    record_bin.push_back(
        MaxPosteriorBin(extracted.Predict(doc.text).Max(), k, num_bins));
  }
  std::vector<Confusion> bin_confusion(num_bins);

  PrivacyReport report;
  std::array<Confusion, 3> entity_pooled{};
  std::array<double, 3> demo_accuracy_sum{0.0, 0.0, 0.0};
  size_t demo_count = 0;

  for (size_t a = 0; a < attributes.size(); ++a) {
    const AttributeTarget& target = attributes[a];
    AttributePrivacy row;
    row.name = target.name;
    row.kind = target.kind;
    row.attribute_std = AttributeStd(eval, target.name);

    TrainConfig attr_tc = tc;
    attr_tc.seed = DeriveSeed(tc.seed, a);
    const InferenceModel f_extracted =
        TrainInference(aux_extracted, a, target.name, attr_tc);
    const InferenceModel f_plain =
        TrainInference(aux_plain, a, target.name, attr_tc);

    size_t ones = 0;
    for (const auto& p : aux_extracted) ones += p.values[a] == 1;
    row.majority_value = 2 * ones > aux_extracted.size() ? 1 : 0;

    std::vector<int> truth, pred_extracted, pred_plain, pred_majority;
    for (size_t i = 0; i < eval_extracted.size(); ++i) {
      truth.push_back(eval_extracted[i].values[a]);
      pred_extracted.push_back(
          InferFromRepresentation(f_extracted, eval_extracted[i].h).value);
      pred_plain.push_back(
          InferFromRepresentation(f_plain, eval_plain[i].h).value);
      pred_majority.push_back(row.majority_value);
    }
    if (target.kind == headline_kind) {
      for (size_t i = 0; i < truth.size(); ++i) {
        bin_confusion[record_bin[i]].Add(std::span(&pred_extracted[i], 1),
                                         std::span(&truth[i], 1));
      }
    }
    row.extracted = EmpiricalPrivacy(pred_extracted, truth, target.kind);
    row.plain_encoder = EmpiricalPrivacy(pred_plain, truth, target.kind);
    row.majority = EmpiricalPrivacy(pred_majority, truth, target.kind);

    if (target.kind == AttributeKind::kDemographic) {
      demo_accuracy_sum[0] += row.extracted.attack_score;
      demo_accuracy_sum[1] += row.plain_encoder.attack_score;
      demo_accuracy_sum[2] += row.majority.attack_score;
      ++demo_count;
    } else {
      entity_pooled[0].Add(pred_extracted, truth);
      entity_pooled[1].Add(pred_plain, truth);
      entity_pooled[2].Add(pred_majority, truth);
    }
    report.attributes.push_back(std::move(row));
  }

  const double lo = 1.0 / static_cast<double>(k);
  for (size_t b = 0; b < num_bins; ++b) {
    PrivacyBin bin;
    bin.lower = lo + (1.0 - lo) * static_cast<double>(b) /
                         static_cast<double>(num_bins);
    bin.upper = lo + (1.0 - lo) * static_cast<double>(b + 1) /
                         static_cast<double>(num_bins);
    bin.records = record_bin.empty()
                      ? 0
                      : static_cast<size_t>(std::count(record_bin.begin(),
                                                       record_bin.end(), b));
    const PrivacyScore score = bin_confusion[b].total == 0
                                   ? PrivacyScore{}
                                   : bin_confusion[b].Score(headline_kind);
    bin.privacy = bin_confusion[b].total == 0 || score.degenerate
                      ? std::numeric_limits<double>::quiet_NaN()
                      : score.privacy;
    report.sharpness_bins.push_back(bin);
  }

  if (demo_count > 0) {
    const auto n = static_cast<double>(demo_count);
    report.demographic = AggregatePrivacy{1.0 - demo_accuracy_sum[0] / n,
                                          1.0 - demo_accuracy_sum[1] / n,
                                          1.0 - demo_accuracy_sum[2] / n};
  }
  if (entity_pooled[0].total > 0) {
    report.entity =
        AggregatePrivacy{entity_pooled[0].Score(AttributeKind::kEntity).privacy,
                         entity_pooled[1].Score(AttributeKind::kEntity).privacy,
                         entity_pooled[2].Score(AttributeKind::kEntity).privacy};
  }
  return report;
}

}  // namespace mealab
