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

#include "modeling/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.h"
#include "common/random.h"
#include "common/text.h"

namespace mealab {

void TrainConfig::Validate() const {
  if (epochs < 1) Fail(ErrorCode::kConfig, "train: epochs must be >= 1");
  if (batch_size < 1) Fail(ErrorCode::kConfig, "train: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) {
    Fail(ErrorCode::kConfig, "train: learning_rate must be > 0");
  }
  if (!(l2 >= 0.0)) Fail(ErrorCode::kConfig, "train: l2 must be >= 0");
}

namespace {

std::vector<double> HardTarget(const std::vector<double>& target) {
  std::vector<double> out(target.size(), 0.0);
  auto it = std::max_element(target.begin(), target.end());
  out[static_cast<size_t>(it - target.begin())] = 1.0;
  return out;
}

void ApplyUpdate(Network& net, Gradient& grad, size_t first_trainable,
                 double step, double decay) {
  auto& layers = net.mutable_layers();
  for (size_t l = first_trainable; l < layers.size(); ++l) {
    Layer& layer = layers[l];
    const Layer& g = grad.layer(l);
    if (decay > 0.0) {
      const double shrink = 1.0 - decay;
      for (double& w : layer.weights) w *= shrink;
    }
    for (uint32_t r : grad.touched_rows(l)) {
      double* w = layer.row(r);
      const double* gw = g.row(r);
      for (size_t o = 0; o < layer.out; ++o) w[o] -= step * gw[o];
    }
    for (size_t o = 0; o < layer.out; ++o) layer.bias[o] -= step * g.bias[o];
  }
}

}  // namespace

TrainStats TrainNetwork(Network& net, std::span<const TrainingExample> data,
                        const TrainConfig& cfg) {
  cfg.Validate();
  TrainStats stats;
  if (data.empty()) return stats;
  const size_t first_trainable = cfg.freeze_encoder ? net.num_layers() - 1 : 0;

  std::vector<std::vector<double>> hard;
  if (cfg.target_mode == TargetMode::kHard) {
    hard.reserve(data.size());
    for (const auto& ex : data) hard.push_back(HardTarget(ex.target));
  }

  Gradient grad(net.layers());
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(DeriveSeed(cfg.seed, static_cast<uint64_t>(epoch)));
    rng.Shuffle(std::span<size_t>(order));
    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      grad.Clear();
      for (size_t b = start; b < end; ++b) {
        const size_t i = order[b];
        const auto& target =
            cfg.target_mode == TargetMode::kHard ? hard[i] : data[i].target;
        epoch_loss += net.Backprop(data[i].input, target, first_trainable, grad);
      }
      const double step = cfg.learning_rate / static_cast<double>(end - start);
      ApplyUpdate(net, grad, first_trainable, step,
                  cfg.learning_rate * cfg.l2);
    }
    stats.epoch_loss.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  return stats;
}

Model Train(const Model& init, std::span<const LabeledText> data,
            const TrainConfig& cfg, TrainStats* stats) {
  cfg.Validate();
  const auto k = static_cast<size_t>(init.num_classes());
  std::vector<TrainingExample> examples;
  examples.reserve(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const Posterior& target = data[i].target;
    if (target.num_classes() != k) {
      Fail(ErrorCode::kValidation,
           "training target " + std::to_string(i) + " has " +
               std::to_string(target.num_classes()) + " classes, model has " +
               std::to_string(k));
    }
    if (!target.IsValid()) {
      Fail(ErrorCode::kValidation,
           "training target " + std::to_string(i) + " is not a valid posterior");
    }
    examples.push_back({init.Encode(data[i].text), target.probs});
  }
  Model model = init;
  TrainStats s = TrainNetwork(model.mutable_network(), examples, cfg);
  if (stats != nullptr) *stats = std::move(s);
  return model;
}

std::vector<Layer> InitPretrained(const EncoderConfig& cfg,
                                  std::span<const std::string> public_corpus,
                                  const PretrainConfig& pretrain) {
  cfg.Validate();
  if (public_corpus.empty()) {
    Fail(ErrorCode::kValidation, "pretraining corpus is empty");
  }
  if (pretrain.proxy_buckets < 2) {
    Fail(ErrorCode::kConfig, "pretrain: proxy_buckets must be >= 2");
  }
  Model proxy = Model::Create(cfg, static_cast<int>(pretrain.proxy_buckets),
                              DeriveSeed(pretrain.seed, 1));
  std::vector<std::vector<std::string>> docs;
  docs.reserve(public_corpus.size());
  for (const auto& text : public_corpus) docs.push_back(Tokenize(text));

  TrainConfig tc;
  tc.epochs = 1;
  tc.batch_size = pretrain.batch_size;
  tc.learning_rate = pretrain.learning_rate;
  std::vector<TrainingExample> examples;
  for (int epoch = 0; epoch < pretrain.epochs; ++epoch) {
    Rng rng(DeriveSeed(pretrain.seed, 1000 + static_cast<uint64_t>(epoch)));
    examples.clear();
    for (const auto& tokens : docs) {
      if (tokens.size() < 2) continue;
      const size_t held = rng.UniformInt(tokens.size());
      std::vector<std::string> rest;
      rest.reserve(tokens.size() - 1);
      for (size_t i = 0; i < tokens.size(); ++i) {
        if (i != held) rest.push_back(tokens[i]);
      }
      const uint64_t bucket =
          HashString(tokens[held], cfg.hash_seed ^ 0x70726f7879ULL) %
          pretrain.proxy_buckets;
      std::vector<double> target(pretrain.proxy_buckets, 0.0);
      target[bucket] = 1.0;
      examples.push_back({proxy.Encode(Join(rest, 0, rest.size())),
                          std::move(target)});
    }
    tc.seed = DeriveSeed(pretrain.seed, 2000 + static_cast<uint64_t>(epoch));
    TrainNetwork(proxy.mutable_network(), examples, tc);
  }
  return proxy.EncoderLayers();
}

}  // namespace mealab
