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

#include "corpus/dataset.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "common/error.h"
#include "common/random.h"
#include "test_util.h"

namespace mealab {
namespace {

using testing::CodeOf;
using testing::MessageOf;

Dataset Numbered(size_t n) {
  Dataset ds;
  ds.num_classes = 2;
  for (size_t i = 0; i < n; ++i) {
    ds.documents.push_back({"doc " + std::to_string(i), static_cast<int>(i % 2), {}});
  }
  return ds;
}

TEST(ParseJsonlTest, TwoLinesGiveTwoClasses) {
  const Dataset ds = ParseJsonl(
      R"({"text": "good film", "label": 1, "attributes": {"gender": 0}}
{"text": "bad film", "label": 0, "attributes": {"gender": 1}}
)",
      "mem");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.num_classes, 2);
  EXPECT_EQ(ds.documents[0].text, "good film");
  EXPECT_EQ(ds.documents[1].label, 0);
  EXPECT_EQ(ds.documents[1].attribute("gender"), 1);
  EXPECT_EQ(ds.attribute_names, std::vector<std::string>{"gender"});
}

TEST(ParseJsonlTest, SingleLabelStillHasTwoClasses) {
  const Dataset ds = ParseJsonl(R"({"text": "x", "label": 0})", "mem");
  EXPECT_EQ(ds.num_classes, 2);
}

TEST(ParseJsonlTest, MissingAttributeIsUnknown) {
  const Dataset ds = ParseJsonl(
      R"({"text": "a", "label": 0, "attributes": {"age": 1}}
{"text": "b", "label": 2})",
      "mem");
  EXPECT_EQ(ds.num_classes, 3);
  EXPECT_EQ(ds.documents[1].attribute("age"), kUnknownAttribute);
}

TEST(ParseJsonlTest, HeaderDeclaresClasses) {
  const Dataset ds = ParseJsonl(
      R"({"num_classes": 5, "attribute_names": ["gender"]}
{"text": "a", "label": 1, "attributes": {"gender": 1}})",
      "mem");
  EXPECT_EQ(ds.num_classes, 5);
  EXPECT_EQ(CodeOf([] {
              ParseJsonl(R"({"num_classes": 2}
{"text": "a", "label": 2})",
                         "mem");
            }),
            ErrorCode::kValidation);
}

TEST(ParseJsonlTest, EmptyFileIsAValidationError) {
  EXPECT_EQ(CodeOf([] { ParseJsonl("", "mem"); }), ErrorCode::kValidation);
  EXPECT_NE(MessageOf([] { ParseJsonl("\n\n", "mem"); }).find("empty dataset"),
            std::string::npos);
}

TEST(ParseJsonlTest, MissingLabelNamesTheLine) {
  auto parse = [] {
    ParseJsonl(R"({"text": "a", "label": 0}
{"text": "b"})",
               "mem");
  };
  EXPECT_EQ(CodeOf(parse), ErrorCode::kParse);
  EXPECT_NE(MessageOf(parse).find("line 2"), std::string::npos);
}

TEST(ParseJsonlTest, MalformedJsonNamesTheLine) {
  auto parse = [] {
    ParseJsonl("{\"text\": \"a\", \"label\": 0}\n{not json}\n", "mem");
  };
  EXPECT_EQ(CodeOf(parse), ErrorCode::kParse);
  EXPECT_NE(MessageOf(parse).find("line 2"), std::string::npos);
}

TEST(JsonlRoundTripTest, PreservesEverything) {
  Dataset ds;
  ds.num_classes = 4;
  ds.attribute_names = {"age", "gender"};
  ds.documents.push_back({"hello \"world\"", 3, {{"age", 1}, {"gender", 0}}});
  ds.documents.push_back({"second", 0, {{"age", kUnknownAttribute}, {"gender", 1}}});
  EXPECT_EQ(ParseJsonl(FormatJsonl(ds), "mem"), ds);

  const auto path =
      std::filesystem::temp_directory_path() / "mealab_dataset_test.jsonl";
  SaveJsonl(ds, path.string());
  EXPECT_EQ(LoadJsonl(path.string()), ds);
  std::filesystem::remove(path);
}

TEST(LoadJsonlTest, MissingFileIsAnIoError) {
  EXPECT_EQ(CodeOf([] { LoadJsonl("/nonexistent/corpus.jsonl"); }),
            ErrorCode::kIo);
}

TEST(SplitTest, HundredDocs) {
  const DatasetSplit s = Split(Numbered(100), {0.10, 1});
  EXPECT_EQ(s.aux.size(), 10u);
  EXPECT_EQ(s.victim.size(), 45u);
  EXPECT_EQ(s.query.size(), 45u);
}

TEST(SplitTest, OddRemainderGoesToVictim) {
  const DatasetSplit s = Split(Numbered(101), {0.10, 1});
  EXPECT_EQ(s.aux.size(), 10u);
  EXPECT_EQ(s.victim.size(), 46u);
  EXPECT_EQ(s.query.size(), 45u);
}

TEST(SplitTest, RejectsBadFractionAndTinyData) {
  EXPECT_EQ(CodeOf([] { Split(Numbered(100), {0.0, 1}); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { Split(Numbered(100), {1.0, 1}); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { Split(Numbered(9), {0.1, 1}); }), ErrorCode::kValidation);
}

TEST(SplitTest, KeepsClassCountAndAttributeNames) {
  Dataset ds = Numbered(20);
  ds.num_classes = 3;
  ds.attribute_names = {"gender"};
  for (auto& d : ds.documents) d.attributes["gender"] = 0;
  const DatasetSplit s = Split(ds, {0.25, 4});
  EXPECT_EQ(s.victim.num_classes, 3);
  EXPECT_EQ(s.aux.attribute_names, ds.attribute_names);
}

// Partition property over many sizes, fractions and seeds.
TEST(SplitTest, IsADeterministicPartition) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 10 + rng.UniformInt(300);
    const double frac = 0.02 + 0.9 * rng.Uniform();
    const uint64_t seed = rng.NextU64();
    const Dataset ds = Numbered(n);
    const DatasetSplit s = Split(ds, {frac, seed});
    EXPECT_EQ(s.aux.size(), static_cast<size_t>(frac * static_cast<double>(n)));
    const size_t rest = n - s.aux.size();
    EXPECT_EQ(s.victim.size(), (rest + 1) / 2);
    EXPECT_EQ(s.query.size(), rest / 2);

    std::map<std::string, int> seen;
    for (const Dataset* part : {&s.aux, &s.victim, &s.query}) {
      for (const auto& d : part->documents) ++seen[d.text];
    }
    ASSERT_EQ(seen.size(), n);
    for (const auto& [text, count] : seen) EXPECT_EQ(count, 1) << text;
    EXPECT_EQ(Split(ds, {frac, seed}).victim, s.victim);
  }
}

TEST(NgramRecallOverlapTest, HandEnumeratedBigrams) {
  // Test bigrams {a b, b c}; query bigrams {b c, c d}.
  Dataset test, queries;
  test.documents.push_back({"a b c", 0, {}});
  queries.documents.push_back({"b c d", 0, {}});
  EXPECT_DOUBLE_EQ(NgramRecallOverlap(queries, test, 2), 0.5);
}

TEST(NgramRecallOverlapTest, IdentityAndDisjoint) {
  Dataset a, b;
  a.documents.push_back({"the quick brown fox", 0, {}});
  a.documents.push_back({"jumps over", 1, {}});
  b.documents.push_back({"lorem ipsum dolor", 0, {}});
  for (int n = 1; n <= 2; ++n) {
    EXPECT_DOUBLE_EQ(NgramRecallOverlap(a, a, n), 1.0);
    EXPECT_DOUBLE_EQ(NgramRecallOverlap(b, a, n), 0.0);
  }
}

TEST(NgramRecallOverlapTest, CountsTypesNotTokens) {
  Dataset test, queries;
  test.documents.push_back({"x x x y", 0, {}});
  queries.documents.push_back({"x", 0, {}});
  EXPECT_DOUBLE_EQ(NgramRecallOverlap(queries, test, 1), 0.5);
}

TEST(NgramRecallOverlapTest, CaseInsensitive) {
  Dataset test, queries;
  test.documents.push_back({"Hello World", 0, {}});
  queries.documents.push_back({"hello WORLD", 0, {}});
  EXPECT_DOUBLE_EQ(NgramRecallOverlap(queries, test, 2), 1.0);
}

TEST(NgramRecallOverlapTest, OrderLongerThanEveryDocIsAnError) {
  Dataset test;
  test.documents.push_back({"a b", 0, {}});
  EXPECT_EQ(CodeOf([&] { NgramRecallOverlap(test, test, 3); }),
            ErrorCode::kUndefinedMetric);
  EXPECT_EQ(CodeOf([&] { NgramRecallOverlap(test, test, 0); }),
            ErrorCode::kInvalidArgument);
}

TEST(NgramRecallOverlapTest, MonotoneInQueries) {
  Rng rng(3);
  Dataset test, queries;
  auto random_doc = [&] {
    std::string s;
    for (int i = 0; i < 8; ++i) s += "t" + std::to_string(rng.UniformInt(30)) + " ";
    return s;
  };
  for (int i = 0; i < 20; ++i) test.documents.push_back({random_doc(), 0, {}});
  double last = 0.0;
  for (int i = 0; i < 40; ++i) {
    queries.documents.push_back({random_doc(), 0, {}});
    for (int n = 1; n <= 2; ++n) {
      const double r = NgramRecallOverlap(queries, test, n);
      if (n == 1) {
        EXPECT_GE(r, last);
        last = r;
      }
    }
  }
}

}  // namespace
}  // namespace mealab
