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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "aia/inference.h"
#include "common/random.h"
#include "corpus/synthetic.h"
#include "modeling/trainer.h"
#include "test_util.h"

namespace mealab {
namespace {

using testing::CodeOf;

// Two Gaussian clusters in R^8 separated along the first axis.
std::vector<RepresentationPair> Clusters(size_t n, uint64_t seed,
                                         bool flip = false) {
  Rng rng(seed);
  std::vector<RepresentationPair> out;
  for (size_t i = 0; i < n; ++i) {
    const int v = static_cast<int>(i % 2);
    RepresentationPair p;
    p.h.resize(8);
    for (double& x : p.h) x = 0.3 * rng.Normal();
    p.h[0] += v == 1 ? 1.0 : -1.0;
    p.values = {flip ? 1 - v : v};
    out.push_back(std::move(p));
  }
  return out;
}

TrainConfig InferenceTraining(uint64_t seed = 1) {
  TrainConfig tc;
  tc.epochs = 20;
  tc.learning_rate = 0.2;
  tc.seed = seed;
  return tc;
}

TEST(TrainInferenceTest, SeparatesGaussianClusters) {
  const InferenceModel f =
      TrainInference(Clusters(400, 1), 0, "x", InferenceTraining(), 16);
  const auto test = Clusters(400, 2);
  size_t hits = 0;
  for (const auto& p : test) {
    const Inference inf = InferFromRepresentation(f, p.h);
    EXPECT_GE(inf.confidence, 0.5);
    EXPECT_LE(inf.confidence, 1.0);
    hits += inf.value == p.values[0];
  }
  EXPECT_GT(static_cast<double>(hits) / test.size(), 0.95);
}

TEST(TrainInferenceTest, SwappingValuesSwapsPredictions) {
  const InferenceModel f =
      TrainInference(Clusters(200, 1), 0, "x", InferenceTraining(), 16);
  const InferenceModel g =
      TrainInference(Clusters(200, 1, true), 0, "x", InferenceTraining(), 16);
  for (const auto& p : Clusters(50, 3)) {
    const Inference a = InferFromRepresentation(f, p.h);
    const Inference b = InferFromRepresentation(g, p.h);
    EXPECT_EQ(a.value, 1 - b.value);
    EXPECT_NEAR(a.confidence, b.confidence, 1e-9);
  }
}

TEST(TrainInferenceTest, PermutedLabelsComplementAccuracy) {
  const InferenceModel f =
      TrainInference(Clusters(200, 1), 0, "x", InferenceTraining(), 16);
  const auto test = Clusters(300, 9);
  std::vector<int> pred, truth, flipped;
  for (const auto& p : test) {
    pred.push_back(InferFromRepresentation(f, p.h).value);
    truth.push_back(p.values[0]);
    flipped.push_back(1 - p.values[0]);
  }
  const double acc =
      EmpiricalPrivacy(pred, truth, AttributeKind::kDemographic).attack_score;
  const double acc_flipped =
      EmpiricalPrivacy(pred, flipped, AttributeKind::kDemographic).attack_score;
  EXPECT_DOUBLE_EQ(acc_flipped, 1.0 - acc);
}

TEST(TrainInferenceTest, Deterministic) {
  const auto pairs = Clusters(100, 4);
  const InferenceModel f = TrainInference(pairs, 0, "x", InferenceTraining(), 8);
  EXPECT_EQ(f.network, TrainInference(pairs, 0, "x", InferenceTraining(), 8).network);
  EXPECT_NE(f.network, TrainInference(pairs, 0, "x", InferenceTraining(2), 8).network);
}

TEST(TrainInferenceTest, DegenerateData) {
  auto pairs = Clusters(10, 5);
  for (auto& p : pairs) p.values = {1};
  pairs[0].values = {0};
  EXPECT_EQ(CodeOf([&] { TrainInference(pairs, 0, "x", InferenceTraining()); }),
            ErrorCode::kDegenerateData);
  pairs[1].values = {0};
  EXPECT_NO_THROW(TrainInference(pairs, 0, "x", InferenceTraining()));
  pairs[2].values = {2};
  EXPECT_EQ(CodeOf([&] { TrainInference(pairs, 0, "x", InferenceTraining()); }),
            ErrorCode::kDegenerateData);
  EXPECT_EQ(CodeOf([&] { TrainInference({}, 0, "x", InferenceTraining()); }),
            ErrorCode::kDegenerateData);
}

TEST(InferTest, WidthMismatchIsRejected) {
  const InferenceModel f =
      TrainInference(Clusters(20, 1), 0, "x", InferenceTraining(), 4);
  const std::vector<double> h(5, 0.0);
  EXPECT_EQ(CodeOf([&] { InferFromRepresentation(f, h); }),
            ErrorCode::kValidation);
}

TEST(InferTest, BatchMatchesSingleCalls) {
  const Model g = Model::Create(EncoderConfig{256, {8}, 0, {1}}, 2, 3);
  std::vector<RepresentationPair> pairs;
  Rng rng(2);
  for (int i = 0; i < 40; ++i) {
    pairs.push_back({g.Representation("w" + std::to_string(i) + " w" +
                                      std::to_string(i % 5)),
                     {i % 2}});
  }
  const InferenceModel f = TrainInference(pairs, 0, "x", InferenceTraining(), 4);
  const std::vector<std::string> texts{"w1 w2", "w3", "w7 w7 w9", ""};
  const auto batch = InferBatch(f, g, texts);
  ASSERT_EQ(batch.size(), texts.size());
  for (size_t i = 0; i < texts.size(); ++i) {
    const Inference one = Infer(f, g, texts[i]);
    EXPECT_EQ(batch[i].value, one.value);
    EXPECT_EQ(batch[i].confidence, one.confidence);
  }
}

TEST(EmpiricalPrivacyTest, PerfectAttackHasNoPrivacy) {
  const std::vector<int> v{0, 1, 1, 0, 1};
  EXPECT_EQ(EmpiricalPrivacy(v, v, AttributeKind::kDemographic).privacy, 0.0);
  EXPECT_EQ(EmpiricalPrivacy(v, v, AttributeKind::kEntity).privacy, 0.0);
}

TEST(EmpiricalPrivacyTest, AccuracySixTenths) {
  const std::vector<int> pred{1, 1, 1, 0, 0, 0, 1, 0, 1, 0};
  const std::vector<int> truth{1, 1, 1, 0, 0, 0, 0, 1, 0, 1};
  EXPECT_NEAR(EmpiricalPrivacy(pred, truth, AttributeKind::kDemographic).privacy,
              0.4, 1e-15);
}

TEST(EmpiricalPrivacyTest, DemographicIsOneMinusAccuracy) {
  const std::vector<int> pred{1, 1, 1, 0}, truth{1, 1, 0, 0};
  const PrivacyScore s = EmpiricalPrivacy(pred, truth, AttributeKind::kDemographic);
  EXPECT_DOUBLE_EQ(s.attack_score, 0.75);
  EXPECT_DOUBLE_EQ(s.privacy, 0.25);
  EXPECT_FALSE(s.degenerate);
}

TEST(EmpiricalPrivacyTest, EntityIsOneMinusF1) {
  // tp = 2, fp = 1, fn = 0: F1 = 4/5.
  const std::vector<int> pred{1, 1, 1, 0}, truth{1, 1, 0, 0};
  const PrivacyScore s = EmpiricalPrivacy(pred, truth, AttributeKind::kEntity);
  EXPECT_DOUBLE_EQ(s.attack_score, 0.8);
  EXPECT_NEAR(s.privacy, 0.2, 1e-15);
  // tp = 1, fp = 1, fn = 1: F1 = 1/2.
  const std::vector<int> p2{1, 1, 0, 0}, t2{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(EmpiricalPrivacy(p2, t2, AttributeKind::kEntity).privacy, 0.5);
}

TEST(EmpiricalPrivacyTest, UndefinedF1IsFlagged) {
  const std::vector<int> zeros{0, 0, 0};
  const PrivacyScore s = EmpiricalPrivacy(zeros, zeros, AttributeKind::kEntity);
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.privacy, 1.0);
}

TEST(EmpiricalPrivacyTest, Errors) {
  const std::vector<int> a{0, 1}, b{0};
  EXPECT_EQ(CodeOf([&] { EmpiricalPrivacy(a, b, AttributeKind::kEntity); }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] {
              EmpiricalPrivacy({}, {}, AttributeKind::kDemographic);
            }),
            ErrorCode::kValidation);
}

TEST(AttributeKindTest, NamesRoundTrip) {
  for (AttributeKind k : {AttributeKind::kDemographic, AttributeKind::kEntity}) {
    EXPECT_EQ(ParseAttributeKind(AttributeKindName(k)), k);
  }
  EXPECT_EQ(CodeOf([] { ParseAttributeKind("location"); }), ErrorCode::kConfig);
}

Dataset AttributeCorpus(size_t n, uint64_t seed, double lambda) {
  SynthConfig cfg;
  cfg.vocab_size = 400;
  cfg.num_classes = 3;
  cfg.label_block_size = 20;
  cfg.num_docs = n;
  cfg.seed = seed;
  cfg.attributes = {{"gender", 0.5, lambda, 20, 0.0}, {"place", 0.3, lambda, 20, 0.0}};
  return GenerateSynthetic(cfg);
}

TEST(CollectRepresentationsTest, ValidatesAttributes) {
  const Model g = Model::Create(EncoderConfig{256, {8}, 0, {1}}, 3, 1);
  Dataset aux = AttributeCorpus(20, 1, 1.0);
  EXPECT_EQ(CollectRepresentations(g, aux, {"place", "gender"}).front().values,
            (std::vector<int>{aux.documents[0].attribute("place"),
                              aux.documents[0].attribute("gender")}));
  EXPECT_EQ(CodeOf([&] { CollectRepresentations(g, aux, {"age"}); }),
            ErrorCode::kValidation);
  aux.documents[3].attributes["gender"] = kUnknownAttribute;
  const std::string msg =
      testing::MessageOf([&] { CollectRepresentations(g, aux, {"gender"}); });
  EXPECT_NE(msg.find("document 3"), std::string::npos) << msg;
}

TEST(CollectRepresentationsTest, ShapeAndDeterminism) {
  const Model g = Model::Create(EncoderConfig{256, {8}, 0, {1}}, 3, 1);
  const Dataset aux = AttributeCorpus(30, 2, 1.0);
  const auto pairs = CollectRepresentations(g, aux, {"gender"});
  ASSERT_EQ(pairs.size(), aux.size());
  for (const auto& p : pairs) EXPECT_EQ(p.h.size(), g.repr_dim());
  const auto again = CollectRepresentations(g, aux, {"gender"});
  for (size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(pairs[i].h, again[i].h);
    EXPECT_EQ(pairs[i].values, again[i].values);
  }
}

TEST(InferTest, TextPathMatchesFittedRepresentation) {
  const Model g = Model::Create(EncoderConfig{256, {8}, 0, {1}}, 3, 1);
  const Dataset aux = AttributeCorpus(60, 3, 2.0);
  const auto pairs = CollectRepresentations(g, aux, {"gender"});
  const InferenceModel f = TrainInference(pairs, 0, "gender", InferenceTraining(), 8);
  for (size_t i = 0; i < 10; ++i) {
    const Inference a = Infer(f, g, aux.documents[i].text);
    const Inference b = InferFromRepresentation(f, pairs[i].h);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.confidence, b.confidence);
  }
}

TEST(RunAiaTest, ReportsEveryAttributeAndBin) {
  const Dataset aux = AttributeCorpus(400, 1, 2.0);
  const Dataset eval = AttributeCorpus(300, 2, 2.0);
  const EncoderConfig enc{1024, {16}, 0, {1}};
  const Model extracted = Model::Create(enc, 3, 1);
  const Model plain = Model::Create(enc, 3, 2);
  const std::vector<AttributeTarget> attrs{{"gender", AttributeKind::kDemographic},
                                           {"place", AttributeKind::kEntity}};
  const PrivacyReport r =
      RunAia(extracted, plain, aux, eval, attrs, InferenceTraining(), 5);
  ASSERT_EQ(r.attributes.size(), 2u);
  ASSERT_TRUE(r.demographic);
  ASSERT_TRUE(r.entity);
  EXPECT_DOUBLE_EQ(r.headline().extracted, r.demographic->extracted);
  EXPECT_DOUBLE_EQ(r.demographic->extracted, r.attributes[0].extracted.privacy);
  // Strong attribute signal: both encoders beat the majority guess.
  EXPECT_LT(r.attributes[0].extracted.privacy, r.attributes[0].majority.privacy);
  EXPECT_EQ(r.attributes[0].majority_value == 0 || r.attributes[0].majority_value == 1,
            true);
  // An all-zero-head model posts uniform posteriors: every record in bin 0.
  ASSERT_EQ(r.sharpness_bins.size(), 5u);
  EXPECT_EQ(r.sharpness_bins[0].records, eval.size());
  EXPECT_NEAR(r.sharpness_bins[0].privacy, r.demographic->extracted, 1e-12);
  EXPECT_TRUE(std::isnan(r.sharpness_bins[4].privacy));
  // The rarer entity value is the positive class; its majority guess is 0.
  EXPECT_EQ(r.attributes[1].majority_value, 0);
  EXPECT_TRUE(r.attributes[1].majority.degenerate == false);
  EXPECT_DOUBLE_EQ(r.attributes[1].majority.privacy, 1.0);
}

TEST(RunAiaTest, NoAttributesIsAConfigError) {
  const Dataset ds = AttributeCorpus(20, 1, 1.0);
  const Model g = Model::Create(EncoderConfig{64, {4}, 0, {1}}, 3, 1);
  EXPECT_EQ(CodeOf([&] { RunAia(g, g, ds, ds, {}, InferenceTraining()); }),
            ErrorCode::kConfig);
}

TEST(PrivacyReportTest, HeadlineFallsBack) {
  PrivacyReport r;
  EXPECT_TRUE(std::isnan(r.headline().extracted));
  r.entity = AggregatePrivacy{0.4, 0.5, 0.6};
  EXPECT_EQ(r.headline().extracted, 0.4);
  r.demographic = AggregatePrivacy{0.1, 0.2, 0.3};
  EXPECT_EQ(r.headline().majority, 0.3);
}

}  // namespace
}  // namespace mealab
