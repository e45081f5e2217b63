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

#ifndef MEALAB_MEA_EXTRACTION_H_
#define MEALAB_MEA_EXTRACTION_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corpus/dataset.h"
#include "modeling/model.h"
#include "modeling/trainer.h"
#include "victim/client.h"
#include "victim/service.h"

namespace mealab {

// Source name that refers to the attacker's same-domain pool (D_Q).
inline constexpr char kSameDomainSource[] = "same_domain";

struct QueryPlan {
  std::string source = kSameDomainSource;
  // Query count is round(size_multiplier * |victim training set|).
  double size_multiplier = 1.0;
  uint64_t seed = 0;
};

struct QuerySample {
  std::vector<std::string> texts;
  bool with_replacement = false;
};

// Draws without replacement when the source holds enough documents, with
// replacement otherwise. Throws kConfig for unknown sources or a plan that
// yields zero queries.
QuerySample SampleQueries(const QueryPlan& plan,
                          const std::map<std::string, const Dataset*>& sources,
                          size_t victim_train_size);

struct TransferProvenance {
  QueryPlan plan;
  bool with_replacement = false;
  bool hard_labels_observed = false;
  // Defense the experimenter configured on the victim, for reports only.
  std::string victim_defense;
};

struct TransferSet {
  std::vector<LabeledText> pairs;
  TransferProvenance provenance;
  bool truncated = false;
  size_t queries_requested = 0;
  size_t queries_spent = 0;
};

// Sends the queries in batches and pairs each text with the returned target.
// Hard labels become one-hot posteriors. When the budget runs out the
// remaining allowance is spent and the set is marked truncated. Transport or
// protocol failures throw kTransport / kProtocol.
TransferSet BuildTransferSet(const std::vector<std::string>& queries,
                             PredictionClient& client, int num_classes,
                             size_t batch_size = 64);

// Fine-tunes the attacker's (pretrained) initialization on the transfer set.
// Throws kAttack when the transfer set is empty.
Model RunExtraction(const TransferSet& ts, const Model& attacker_init,
                    const TrainConfig& tc);

// Fraction of eval documents on which the two argmax labels agree.
double Agreement(const Model& a, const Model& b, const Dataset& eval);
// Against a victim through the measurement channel (no defense, no budget).
double Agreement(const Model& a, const VictimService& victim,
                 const Dataset& eval);
double Accuracy(const Model& m, const Dataset& eval);

struct ExtractionReport {
  std::string extracted_model_id;
  double victim_accuracy = 0.0;
  double extracted_accuracy = 0.0;
  double agreement = 0.0;
  size_t queries_spent = 0;
  bool truncated = false;
  bool with_replacement = false;
  std::map<int, double> overlap;  // n -> n-gram recall overlap
};

}  // namespace mealab

#endif  // MEALAB_MEA_EXTRACTION_H_
