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

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "corpus/synthetic.h"
#include "modeling/model.h"
#include "modeling/trainer.h"
#include "test_util.h"

namespace mealab {
namespace {

using testing::CodeOf;

const EncoderConfig kEncoder{1024, {16}, 0, {1}};

Dataset SmallCorpus(size_t n, uint64_t seed, int k = 3) {
  SynthConfig cfg;
  cfg.vocab_size = 400;
  cfg.num_classes = k;
  cfg.label_block_size = 20;
  cfg.num_docs = n;
  cfg.seed = seed;
  return GenerateSynthetic(cfg);
}

std::vector<LabeledText> OneHotTargets(const Dataset& ds) {
  std::vector<LabeledText> out;
  for (const auto& d : ds.documents) {
    out.push_back({d.text, Posterior::OneHot(d.label, ds.num_classes)});
  }
  return out;
}

double Accuracy(const Model& m, const Dataset& ds) {
  size_t hits = 0;
  for (const auto& d : ds.documents) hits += m.Predict(d.text).Argmax() == d.label;
  return static_cast<double>(hits) / static_cast<double>(ds.size());
}

TrainConfig Quick(uint64_t seed = 1) {
  TrainConfig tc;
  tc.epochs = 5;
  tc.batch_size = 16;
  tc.learning_rate = 1.0;
  tc.seed = seed;
  return tc;
}

TEST(TrainConfigTest, Validation) {
  TrainConfig tc;
  EXPECT_NO_THROW(tc.Validate());
  tc.epochs = 0;
  EXPECT_EQ(CodeOf([&] { tc.Validate(); }), ErrorCode::kConfig);
  tc = TrainConfig{};
  tc.learning_rate = 0.0;
  EXPECT_EQ(CodeOf([&] { tc.Validate(); }), ErrorCode::kConfig);
  tc = TrainConfig{};
  tc.l2 = -1.0;
  EXPECT_EQ(CodeOf([&] { tc.Validate(); }), ErrorCode::kConfig);
}

TEST(TrainTest, DeterministicGivenSeed) {
  const auto data = OneHotTargets(SmallCorpus(200, 1));
  const Model init = Model::Create(kEncoder, 3, 9);
  const Model a = Train(init, data, Quick(4));
  const Model b = Train(init, data, Quick(4));
  EXPECT_EQ(a.Serialize(), b.Serialize());
  EXPECT_NE(a.Serialize(), Train(init, data, Quick(5)).Serialize());
}

TEST(TrainTest, LossDecreasesAndAccuracyRises) {
  const Dataset train = SmallCorpus(600, 2);
  const Dataset test = SmallCorpus(300, 3);
  TrainStats stats;
  const Model m = Train(Model::Create(kEncoder, 3, 1), OneHotTargets(train),
                        Quick(), &stats);
  ASSERT_EQ(stats.epoch_loss.size(), 5u);
  EXPECT_LT(stats.epoch_loss.back(), stats.epoch_loss.front());
  EXPECT_GT(Accuracy(m, test), 0.8);
}

TEST(TrainTest, TwoClassesFromTwoHundredDocs) {
  SynthConfig cfg;
  cfg.vocab_size = 300;
  cfg.num_classes = 2;
  cfg.label_block_size = 20;
  cfg.lambda_label = 5.0;
  cfg.num_docs = 200;
  cfg.seed = 12;
  const Dataset train = GenerateSynthetic(cfg);
  cfg.num_docs = 500;
  cfg.seed = 13;
  const Dataset test = GenerateSynthetic(cfg);
  TrainConfig tc = Quick();
  tc.epochs = 10;
  const Model m = Train(Model::Create(kEncoder, 2, 1), OneHotTargets(train), tc);
  EXPECT_GT(Accuracy(m, test), 0.95);
}

TEST(TrainTest, LabelBlockTokensDecideTheClass) {
  const Dataset train = SmallCorpus(600, 14);
  TrainConfig tc = Quick();
  tc.epochs = 10;
  const Model m = Train(Model::Create(kEncoder, 3, 1), OneHotTargets(train), tc);
  // Class c owns token ids [20c, 20c + 20).
  for (int c = 0; c < 3; ++c) {
    std::string text;
    for (int id = 20 * c; id < 20 * c + 20; ++id) text += "w" + std::to_string(id) + " ";
    EXPECT_EQ(m.Predict(text).Argmax(), c);
  }
}

TEST(TrainTest, HardModeOnOneHotsMatchesSoftMode) {
  const auto data = OneHotTargets(SmallCorpus(150, 4));
  const Model init = Model::Create(kEncoder, 3, 2);
  TrainConfig hard = Quick();
  hard.target_mode = TargetMode::kHard;
  EXPECT_EQ(Train(init, data, hard).Serialize(),
            Train(init, data, Quick()).Serialize());
}

TEST(TrainTest, HardModeUsesArgmaxOfSoftTargets) {
  const Dataset ds = SmallCorpus(150, 5);
  std::vector<LabeledText> soft, onehot;
  for (const auto& d : ds.documents) {
    std::vector<double> p(3, 0.2);
    p[d.label] = 0.6;
    soft.push_back({d.text, Posterior{p}});
    onehot.push_back({d.text, Posterior::OneHot(d.label, 3)});
  }
  const Model init = Model::Create(kEncoder, 3, 2);
  TrainConfig hard = Quick();
  hard.target_mode = TargetMode::kHard;
  EXPECT_EQ(Train(init, soft, hard).Serialize(),
            Train(init, onehot, Quick()).Serialize());
}

TEST(TrainTest, RejectsMismatchedTargets) {
  const Model init = Model::Create(kEncoder, 3, 2);
  const std::vector<LabeledText> bad{{"a b", Posterior::OneHot(0, 4)}};
  EXPECT_EQ(CodeOf([&] { Train(init, bad, Quick()); }), ErrorCode::kValidation);
  const std::vector<LabeledText> invalid{{"a b", Posterior{{0.5, 0.5, 0.5}}}};
  EXPECT_EQ(CodeOf([&] { Train(init, invalid, Quick()); }),
            ErrorCode::kValidation);
}

TEST(TrainTest, EmptyDataLeavesModelUnchanged) {
  const Model init = Model::Create(kEncoder, 3, 2);
  EXPECT_EQ(Train(init, std::vector<LabeledText>{}, Quick()), init);
}

TEST(TrainTest, FreezeEncoderKeepsEncoderLayers) {
  const auto data = OneHotTargets(SmallCorpus(200, 6));
  const Model init = Model::Create(kEncoder, 3, 2);
  TrainConfig tc = Quick();
  tc.freeze_encoder = true;
  const Model m = Train(init, data, tc);
  EXPECT_EQ(m.EncoderLayers(), init.EncoderLayers());
  EXPECT_NE(m, init);
}

// Relabeling classes by a permutation before training permutes the trained
// model's posteriors the same way.
TEST(TrainTest, PermutationEquivariance) {
  const Dataset ds = SmallCorpus(200, 7);
  const std::array<int, 3> perm{2, 0, 1};
  std::vector<LabeledText> base, permuted;
  for (const auto& d : ds.documents) {
    std::vector<double> p{0.1, 0.2, 0.3};
    p[d.label] += 0.4;
    std::vector<double> q(3);
    for (int c = 0; c < 3; ++c) q[perm[c]] = p[c];
    base.push_back({d.text, Posterior{p}});
    permuted.push_back({d.text, Posterior{q}});
  }
  const Model init = Model::Create(kEncoder, 3, 3);
  const Model a = Train(init, base, Quick());
  const Model b = Train(init, permuted, Quick());
  for (size_t i = 0; i < 20; ++i) {
    const Posterior pa = a.Predict(ds.documents[i].text);
    const Posterior pb = b.Predict(ds.documents[i].text);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(pb.probs[perm[c]], pa.probs[c], 1e-9);
  }
}

TEST(InitPretrainedTest, DeterministicAndSeedSensitive) {
  std::vector<std::string> texts;
  for (const auto& d : SmallCorpus(100, 8).documents) texts.push_back(d.text);
  PretrainConfig pc;
  pc.epochs = 1;
  pc.proxy_buckets = 16;
  const auto a = InitPretrained(kEncoder, texts, pc);
  EXPECT_EQ(a, InitPretrained(kEncoder, texts, pc));
  EXPECT_EQ(a.size(), kEncoder.hidden_dims.size());
  pc.seed = 1;
  EXPECT_NE(a, InitPretrained(kEncoder, texts, pc));
}

TEST(InitPretrainedTest, Errors) {
  PretrainConfig pc;
  EXPECT_EQ(CodeOf([&] { InitPretrained(kEncoder, {}, pc); }),
            ErrorCode::kValidation);
  const std::vector<std::string> texts{"a b c"};
  pc.proxy_buckets = 1;
  EXPECT_EQ(CodeOf([&] { InitPretrained(kEncoder, texts, pc); }),
            ErrorCode::kConfig);
}

}  // namespace
}  // namespace mealab
