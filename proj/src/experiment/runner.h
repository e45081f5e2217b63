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

#ifndef MEALAB_EXPERIMENT_RUNNER_H_
#define MEALAB_EXPERIMENT_RUNNER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aia/inference.h"
#include "experiment/config.h"
#include "metrics/metrics.h"

namespace mealab {

// One (query plan, defense, seed) cell of the experiment grid.
struct ExperimentRow {
  size_t plan_index = 0;
  size_t defense_index = 0;
  uint64_t seed = 0;
  QueryPlan plan;
  DefenseConfig defense;

  // "ok", or "<stage>: <message>" when a stage failed. Stages: data,
  // pretrain, victim, serve, mea, aia.
  std::string status = "ok";
  bool ok() const { return status == "ok"; }

  // Accuracy on the test set of the undefended victim, and of the argmax
  // of its defended output (the API's utility).
  double victim_accuracy = 0.0;
  double utility = 0.0;

  size_t queries_requested = 0;
  size_t queries_spent = 0;
  bool truncated = false;
  bool with_replacement = false;
  bool hard_labels = false;
  double extracted_accuracy = 0.0;
  double agreement = 0.0;
  std::map<int, double> overlap;  // n -> n-gram recall of the test set

  SharpnessStats sharpness;  // of the transfer-set targets
  PrivacyReport privacy;
};

struct ExperimentReport {
  std::string config_name;
  std::vector<ExperimentRow> rows;  // ordered by (plan, defense, seed)
};

using ProgressFn = std::function<void(const std::string&)>;

// Runs the whole grid. Stage failures are recorded on the affected rows and
// the run continues. Deterministic given the config.
ExperimentReport RunExperiment(const ExperimentConfig& cfg,
                               const ProgressFn& progress = nullptr);

// Writes mea.csv, aia.csv, defense_sweep.csv, sharpness.csv and
// summary.csv into `dir`, creating it if needed.
void WriteReport(const ExperimentReport& report, const ExperimentConfig& cfg,
                 const std::string& dir);

// Writes the corpora a run would generate for each seed (train, test,
// public and every synthetic query source) as JSONL under `dir`. Returns
// the paths written.
std::vector<std::string> EmitSyntheticCorpora(const ExperimentConfig& cfg,
                                              const std::string& dir);

}  // namespace mealab

#endif  // MEALAB_EXPERIMENT_RUNNER_H_
