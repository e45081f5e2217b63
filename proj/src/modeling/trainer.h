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

#ifndef MEALAB_MODELING_TRAINER_H_
#define MEALAB_MODELING_TRAINER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "modeling/features.h"
#include "modeling/model.h"
#include "modeling/network.h"

namespace mealab {

enum class TargetMode { kSoft, kHard };

struct TrainConfig {
  int epochs = 10;
  size_t batch_size = 32;
  double learning_rate = 0.5;
  double l2 = 0.0;
  uint64_t seed = 0;
  TargetMode target_mode = TargetMode::kSoft;
  bool freeze_encoder = false;

  // Throws kConfig.
  void Validate() const;
};

struct TrainingExample {
  SparseVector input;
  std::vector<double> target;
};

struct TrainStats {
  // Mean mini-batch loss seen during each epoch (before each update).
  std::vector<double> epoch_loss;
};

// Plain mini-batch gradient descent on H(target, softmax(net(x))) plus
// (l2 / 2) * |W|^2 over weights (not biases). The example order is reshuffled
// each epoch from (seed, epoch). Targets are replaced by one-hot argmax in
// hard mode.
TrainStats TrainNetwork(Network& net, std::span<const TrainingExample> data,
                        const TrainConfig& cfg);

struct LabeledText {
  std::string text;
  Posterior target;
};

// Fine-tunes a copy of `init` on (text, target posterior) pairs. Throws
// kValidation if a target is not a valid posterior over init's K classes.
Model Train(const Model& init, std::span<const LabeledText> data,
            const TrainConfig& cfg, TrainStats* stats = nullptr);

struct PretrainConfig {
  int epochs = 3;
  size_t batch_size = 32;
  double learning_rate = 0.5;
  size_t proxy_buckets = 64;
  uint64_t seed = 0;
};

// Self-supervised proxy task: for each document one token position is held
// out (redrawn every epoch) and the encoder plus a throwaway head learns to
// predict that token's hash bucket from the remaining text. Returns the
// encoder layers only. Deterministic given (cfg, corpus, pretrain seed).
std::vector<Layer> InitPretrained(const EncoderConfig& cfg,
                                  std::span<const std::string> public_corpus,
                                  const PretrainConfig& pretrain);

}  // namespace mealab

#endif  // MEALAB_MODELING_TRAINER_H_
