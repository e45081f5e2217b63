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

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "common/random.h"
#include "corpus/synthetic.h"
#include "mea/extraction.h"
#include "modeling/trainer.h"
#include "test_util.h"
#include "victim/client.h"
#include "victim/service.h"

namespace mealab {
namespace {

using testing::CodeOf;

Dataset Pool(size_t n, uint64_t seed) {
  SynthConfig cfg;
  cfg.vocab_size = 400;
  cfg.num_classes = 3;
  cfg.label_block_size = 20;
  cfg.num_docs = n;
  cfg.seed = seed;
  return GenerateSynthetic(cfg);
}

std::shared_ptr<const Model> Victim(const Dataset& train) {
  std::vector<LabeledText> data;
  for (const auto& d : train.documents) {
    data.push_back({d.text, Posterior::OneHot(d.label, train.num_classes)});
  }
  TrainConfig tc;
  tc.epochs = 5;
  tc.learning_rate = 1.0;
  return std::make_shared<const Model>(
      Train(Model::Create(EncoderConfig{1024, {16}, 0, {1}}, 3, 1), data, tc));
}

std::vector<std::string> TextsOf(const Dataset& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds.documents) out.push_back(d.text);
  return out;
}

TEST(SampleQueriesTest, SizeFollowsMultiplier) {
  const Dataset pool = Pool(1000, 1);
  const std::map<std::string, const Dataset*> sources{{"same_domain", &pool}};
  QueryPlan plan;
  plan.size_multiplier = 0.5;
  const QuerySample s = SampleQueries(plan, sources, 1000);
  EXPECT_EQ(s.texts.size(), 500u);
  EXPECT_FALSE(s.with_replacement);
  // Without replacement every sampled document is distinct.
  std::multiset<std::string> pool_texts;
  for (const auto& d : pool.documents) pool_texts.insert(d.text);
  std::multiset<std::string> seen(s.texts.begin(), s.texts.end());
  for (const auto& t : seen) EXPECT_LE(seen.count(t), pool_texts.count(t));
}

TEST(SampleQueriesTest, UnitMultiplier) {
  const Dataset pool = Pool(800, 1);
  const std::map<std::string, const Dataset*> sources{{"same_domain", &pool}};
  EXPECT_EQ(SampleQueries(QueryPlan{}, sources, 500).texts.size(), 500u);
}

TEST(SampleQueriesTest, OversizedPlansSampleWithReplacement) {
  const Dataset pool = Pool(100, 1);
  const std::map<std::string, const Dataset*> sources{{"same_domain", &pool}};
  QueryPlan plan;
  plan.size_multiplier = 5.0;
  const QuerySample s = SampleQueries(plan, sources, 100);
  EXPECT_EQ(s.texts.size(), 500u);
  EXPECT_TRUE(s.with_replacement);
}

TEST(SampleQueriesTest, DeterministicGivenSeed) {
  const Dataset pool = Pool(300, 1);
  const std::map<std::string, const Dataset*> sources{{"same_domain", &pool}};
  QueryPlan plan;
  plan.seed = 4;
  const auto a = SampleQueries(plan, sources, 100).texts;
  EXPECT_EQ(a, SampleQueries(plan, sources, 100).texts);
  plan.seed = 5;
  EXPECT_NE(a, SampleQueries(plan, sources, 100).texts);
}

TEST(SampleQueriesTest, Errors) {
  const Dataset pool = Pool(10, 1);
  const std::map<std::string, const Dataset*> sources{{"same_domain", &pool}};
  QueryPlan plan;
  plan.source = "elsewhere";
  EXPECT_EQ(CodeOf([&] { SampleQueries(plan, sources, 10); }), ErrorCode::kConfig);
  plan = QueryPlan{};
  plan.size_multiplier = 0.0;
  EXPECT_EQ(CodeOf([&] { SampleQueries(plan, sources, 10); }), ErrorCode::kConfig);
  plan.size_multiplier = 0.01;
  EXPECT_EQ(CodeOf([&] { SampleQueries(plan, sources, 10); }), ErrorCode::kConfig);
}

class TransferSetTest : public ::testing::Test {
 protected:
  Dataset train_ = Pool(300, 2);
  std::shared_ptr<const Model> victim_ = Victim(train_);
  std::vector<std::string> queries_ = TextsOf(Pool(150, 3));
};

TEST_F(TransferSetTest, TargetsArePassedThrough) {
  VictimService service(victim_, DefenseConfig{});
  service.ledger().Register("attacker", 1000);
  InProcessClient client(service, "attacker");
  const TransferSet ts = BuildTransferSet(queries_, client, 3, 32);
  ASSERT_EQ(ts.pairs.size(), queries_.size());
  EXPECT_FALSE(ts.truncated);
  EXPECT_EQ(ts.queries_spent, 150u);
  EXPECT_FALSE(ts.provenance.hard_labels_observed);
  for (size_t i = 0; i < queries_.size(); ++i) {
    EXPECT_EQ(ts.pairs[i].text, queries_[i]);
    EXPECT_EQ(ts.pairs[i].target, victim_->Predict(queries_[i]));
  }
}

TEST_F(TransferSetTest, BudgetTruncatesAtTheAllowance) {
  VictimService service(victim_, DefenseConfig{});
  service.ledger().Register("attacker", 100);
  InProcessClient client(service, "attacker");
  const TransferSet ts = BuildTransferSet(queries_, client, 3, 64);
  EXPECT_TRUE(ts.truncated);
  EXPECT_EQ(ts.queries_requested, 150u);
  EXPECT_EQ(ts.queries_spent, 100u);
  EXPECT_EQ(ts.pairs.size(), 100u);
  EXPECT_EQ(service.ledger().Lookup("attacker")->used, 100u);
  for (size_t i = 0; i < ts.pairs.size(); ++i) {
    EXPECT_EQ(ts.pairs[i].text, queries_[i]);
  }
}

TEST_F(TransferSetTest, HardLabelsBecomeOneHots) {
  VictimService service(victim_, DefenseConfig::Parse("soften:0"));
  service.ledger().Register("attacker", 1000);
  InProcessClient client(service, "attacker");
  const TransferSet ts = BuildTransferSet(queries_, client, 3);
  EXPECT_TRUE(ts.provenance.hard_labels_observed);
  for (size_t i = 0; i < ts.pairs.size(); ++i) {
    EXPECT_EQ(ts.pairs[i].target,
              Posterior::OneHot(victim_->Predict(queries_[i]).Argmax(), 3));
  }
}

TEST_F(TransferSetTest, UnknownClientIsATransportFailure) {
  VictimService service(victim_, DefenseConfig{});
  InProcessClient client(service, "stranger");
  EXPECT_EQ(CodeOf([&] { BuildTransferSet(queries_, client, 3); }),
            ErrorCode::kTransport);
}

TEST_F(TransferSetTest, ExtractionAgreesWithTheVictim) {
  VictimService service(victim_, DefenseConfig{});
  service.ledger().Register("attacker", 1000);
  InProcessClient client(service, "attacker");
  const auto queries = TextsOf(Pool(600, 4));
  const TransferSet ts = BuildTransferSet(queries, client, 3);
  TrainConfig tc;
  tc.epochs = 10;
  tc.learning_rate = 1.0;
  const Model extracted =
      RunExtraction(ts, Model::Create(EncoderConfig{1024, {16}, 0, {1}}, 3, 9), tc);
  const Dataset eval = Pool(300, 5);
  EXPECT_GT(Agreement(extracted, service, eval), 0.85);
  EXPECT_GT(Accuracy(*victim_, eval), 0.85);
}

TEST_F(TransferSetTest, VictimInputsReproduceVictimAccuracy) {
  VictimService service(victim_, DefenseConfig{});
  service.ledger().Register("attacker", 1000);
  InProcessClient client(service, "attacker");
  const TransferSet ts = BuildTransferSet(TextsOf(train_), client, 3);
  TrainConfig tc;
  tc.epochs = 10;
  tc.learning_rate = 1.0;
  const Model extracted =
      RunExtraction(ts, Model::Create(EncoderConfig{1024, {16}, 0, {1}}, 3, 9), tc);
  const Dataset eval = Pool(400, 11);
  EXPECT_GE(Accuracy(extracted, eval), Accuracy(*victim_, eval) - 0.03);
}

TEST(ExtractionTest, EmptyTransferSetIsAnAttackError) {
  EXPECT_EQ(CodeOf([] {
              RunExtraction(TransferSet{}, Model::Create(EncoderConfig{}, 3, 1),
                            TrainConfig{});
            }),
            ErrorCode::kAttack);
}

TEST(AgreementTest, SelfAgreementIsOne) {
  const Dataset eval = Pool(50, 6);
  const auto m = Victim(Pool(100, 7));
  EXPECT_EQ(Agreement(*m, *m, eval), 1.0);
}

TEST(AgreementTest, ConstantModelsThatDifferNeverAgree) {
  Model a = Model::Create(EncoderConfig{64, {4}, 0, {1}}, 3, 1);
  Model b = a;
  a.mutable_network().mutable_layers().back().bias = {5.0, 0.0, 0.0};
  b.mutable_network().mutable_layers().back().bias = {0.0, 5.0, 0.0};
  const Dataset eval = Pool(40, 6);
  EXPECT_EQ(Agreement(a, b, eval), 0.0);
  Model c = Model::Create(EncoderConfig{64, {4}, 0, {1}}, 4, 1);
  EXPECT_EQ(CodeOf([&] { Agreement(a, c, eval); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] { Agreement(a, b, Dataset{}); }), ErrorCode::kValidation);
}

TEST(AgreementTest, InvariantToEvaluationOrder) {
  const Dataset eval = Pool(200, 8);
  const auto a = Victim(Pool(100, 9));
  const auto b = Victim(Pool(100, 10));
  Dataset shuffled = eval;
  Rng rng(1);
  rng.Shuffle(std::span<Document>(shuffled.documents));
  EXPECT_EQ(Agreement(*a, *b, eval), Agreement(*a, *b, shuffled));
}

}  // namespace
}  // namespace mealab
