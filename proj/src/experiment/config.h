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

#ifndef MEALAB_EXPERIMENT_CONFIG_H_
#define MEALAB_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aia/inference.h"
#include "corpus/dataset.h"
#include "corpus/synthetic.h"
#include "mea/extraction.h"
#include "modeling/features.h"
#include "modeling/trainer.h"
#include "victim/defense.h"

namespace mealab {

// A corpus is either generated (synthetic) or read from a JSONL file.
struct CorpusSource {
  std::optional<SynthConfig> synthetic;
  std::string path;
};

struct CorpusSpec {
  CorpusSource train;
  // Held-out documents for accuracy and agreement. For synthetic corpora the
  // test set comes from the same generator with a different seed.
  CorpusSource test;
};

struct QuerySource {
  std::string name;
  CorpusSource corpus;
};

enum class Transport { kInProcess, kNetworked };

struct ExperimentConfig {
  std::string name = "experiment";
  CorpusSpec corpus;
  SplitSpec split;
  // Text-only corpus both parties' encoders are pretrained on.
  CorpusSource public_corpus;
  PretrainConfig pretrain;
  EncoderConfig victim_encoder;
  TrainConfig victim_train;
  EncoderConfig attacker_encoder;
  TrainConfig attacker_train;
  TrainConfig aia_train;
  std::vector<QuerySource> query_sources;
  std::vector<QueryPlan> query_plans;
  std::vector<DefenseConfig> defenses;
  std::vector<AttributeTarget> attributes;
  std::vector<uint64_t> seeds;
  std::vector<int> overlap_orders{1, 2};
  // Allowance of the attacker's client id; unset means exactly the number
  // of queries each plan needs.
  std::optional<uint64_t> query_budget;
  // Plan whose rows feed defense_sweep.csv.
  size_t sweep_plan = 0;
  std::string output_dir;
  Transport transport = Transport::kInProcess;
  bool save_models = false;
};

struct ConfigIssue {
  int line = 0;  // 1-based; 0 when no location applies
  std::string path;
  std::string message;

  std::string ToString() const;
};

struct ConfigParse {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigIssue> issues;

  bool ok() const { return issues.empty(); }
  std::string Describe() const;
};

// Runs every schema and cross-field check and collects all problems.
// Relative file paths resolve against `base_dir`; referenced files must
// exist.
ConfigParse ParseExperimentConfig(const std::string& text,
                                  const std::string& base_dir);
ConfigParse ValidateExperimentConfigFile(const std::string& path);
// Throws kConfig listing every issue.
ExperimentConfig LoadExperimentConfig(const std::string& path);

const char* TransportName(Transport t);

}  // namespace mealab

#endif  // MEALAB_EXPERIMENT_CONFIG_H_
