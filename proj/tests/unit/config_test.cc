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

#include <string>

#include <gtest/gtest.h>

#include "experiment/config.h"
#include "test_util.h"

namespace mealab {
namespace {

using testing::CodeOf;

const std::string kConfigDir = std::string(MEALAB_SOURCE_DIR) + "/configs";

constexpr char kMinimal[] = R"(name: tiny
seeds: [3]
corpus:
  synthetic: {vocab_size: 300, num_classes: 3, label_block_size: 15, num_docs: 200,
              attributes: [{name: gender}]}
attributes: [gender]
)";

bool HasIssue(const ConfigParse& parse, const std::string& needle) {
  return parse.Describe().find(needle) != std::string::npos;
}

TEST(ConfigTest, ShippedConfigsValidate) {
  for (const char* name : {"reference.yaml", "smoke.yaml"}) {
    const ConfigParse parse = ValidateExperimentConfigFile(kConfigDir + "/" + name);
    EXPECT_TRUE(parse.ok()) << name << "\n" << parse.Describe();
  }
}

TEST(ConfigTest, MinimalConfigGetsDefaults) {
  const ConfigParse parse = ParseExperimentConfig(kMinimal, ".");
  ASSERT_TRUE(parse.ok()) << parse.Describe();
  const ExperimentConfig& cfg = *parse.config;
  EXPECT_EQ(cfg.name, "tiny");
  EXPECT_EQ(cfg.seeds, (std::vector<uint64_t>{3}));
  ASSERT_EQ(cfg.query_plans.size(), 1u);
  EXPECT_EQ(cfg.query_plans[0].source, "same_domain");
  EXPECT_EQ(cfg.query_plans[0].size_multiplier, 1.0);
  ASSERT_EQ(cfg.defenses.size(), 1u);
  EXPECT_EQ(cfg.defenses[0], DefenseConfig{});
  ASSERT_EQ(cfg.attributes.size(), 1u);
  EXPECT_EQ(cfg.attributes[0].kind, AttributeKind::kDemographic);
  EXPECT_EQ(cfg.transport, Transport::kInProcess);
  ASSERT_TRUE(cfg.corpus.train.synthetic);
  EXPECT_EQ(cfg.corpus.train.synthetic->num_classes, 3);
  EXPECT_FALSE(cfg.query_budget);
}

TEST(ConfigTest, MissingSeeds) {
  const ConfigParse parse = ParseExperimentConfig("name: x\ncorpus:\n  synthetic: {}\n", ".");
  EXPECT_FALSE(parse.ok());
  EXPECT_TRUE(HasIssue(parse, "seeds: empty")) << parse.Describe();
}

TEST(ConfigTest, NegativeTemperatureNamesTheLine) {
  const ConfigParse parse =
      ParseExperimentConfig(std::string(kMinimal) + "defenses: [none, \"soften:-1\"]\n", ".");
  EXPECT_FALSE(parse.ok());
  EXPECT_TRUE(HasIssue(parse, "line 7: defenses[1]")) << parse.Describe();
  EXPECT_TRUE(HasIssue(parse, "tau must be >= 0"));
}

TEST(ConfigTest, DefenseMaps) {
  EXPECT_TRUE(HasIssue(ParseExperimentConfig(std::string(kMinimal) +
                                                 "defenses: [{mode: blur}]\n",
                                             "."),
                       "unknown mode 'blur'"));
  const ConfigParse parse = ParseExperimentConfig(
      std::string(kMinimal) +
          "defenses:\n  - {mode: soften, tau: 2}\n  - {mode: perturb, sigma: 0.1, "
          "noise_seed: 4}\n",
      ".");
  ASSERT_TRUE(parse.ok()) << parse.Describe();
  EXPECT_EQ(parse.config->defenses[0].ToString(), "soften:2");
  EXPECT_EQ(parse.config->defenses[1].ToString(), "perturb:0.1:4");
}

TEST(ConfigTest, UnknownKeysAreFlagged) {
  const ConfigParse parse =
      ParseExperimentConfig(std::string(kMinimal) + "victim:\n  epochz: 3\n", ".");
  EXPECT_FALSE(parse.ok());
  EXPECT_TRUE(HasIssue(parse, "epochz")) << parse.Describe();
}

TEST(ConfigTest, UnknownQuerySource) {
  const ConfigParse parse = ParseExperimentConfig(
      std::string(kMinimal) + "query_plans: [{source: nowhere}]\n", ".");
  EXPECT_TRUE(HasIssue(parse, "unknown query source 'nowhere'")) << parse.Describe();
}

TEST(ConfigTest, UnknownAttributeKind) {
  std::string text = kMinimal;
  text.replace(text.find("attributes: [gender]"), 20,
               "attributes: [{name: gender, kind: secret}]");
  const ConfigParse parse = ParseExperimentConfig(text, ".");
  EXPECT_TRUE(HasIssue(parse, "attributes[0].kind")) << parse.Describe();
}

TEST(ConfigTest, MissingCorpusFile) {
  const ConfigParse parse = ParseExperimentConfig(
      "seeds: [1]\ncorpus: {train: nope.jsonl, test: nope.jsonl}\n", "/nonexistent");
  EXPECT_FALSE(parse.ok());
  EXPECT_TRUE(HasIssue(parse, "nope.jsonl")) << parse.Describe();
}

TEST(ConfigTest, MalformedYaml) {
  EXPECT_FALSE(ParseExperimentConfig("seeds: [1\n", ".").ok());
}

TEST(ConfigTest, LoadThrowsConfigErrors) {
  EXPECT_EQ(CodeOf([] { LoadExperimentConfig("/nonexistent/x.yaml"); }),
            ErrorCode::kConfig);
  EXPECT_NO_THROW(LoadExperimentConfig(kConfigDir + "/smoke.yaml"));
}

}  // namespace
}  // namespace mealab
