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
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "common/error.h"
#include "common/random.h"
#include "common/text.h"
#include "json.hpp"

namespace mealab {

using nlohmann::json;

int Document::attribute(const std::string& name) const {
  auto it = attributes.find(name);
  return it == attributes.end() ? kUnknownAttribute : it->second;
}

bool Dataset::HasAttribute(const std::string& name) const {
  return std::find(attribute_names.begin(), attribute_names.end(), name) !=
         attribute_names.end();
}

void Dataset::Validate() const {
  if (num_classes < 2) {
    Fail(ErrorCode::kValidation,
         "num_classes must be >= 2, got " + std::to_string(num_classes));
  }
  for (size_t i = 0; i < documents.size(); ++i) {
    const Document& doc = documents[i];
    if (doc.label < 0 || doc.label >= num_classes) {
      Fail(ErrorCode::kValidation, "document " + std::to_string(i) +
                                       ": label " + std::to_string(doc.label) +
                                       " outside [0, " +
                                       std::to_string(num_classes) + ")");
    }
    for (const auto& [name, value] : doc.attributes) {
      if (!HasAttribute(name)) {
        Fail(ErrorCode::kValidation, "document " + std::to_string(i) +
                                         ": undeclared attribute '" + name +
                                         "'");
      }
      if (value < kUnknownAttribute) {
        Fail(ErrorCode::kValidation, "document " + std::to_string(i) +
                                         ": negative value for '" + name +
                                         "'");
      }
    }
  }
}

namespace {

Document ParseRecord(const json& j, size_t line_no) {
  auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
  if (!j.is_object()) Fail(ErrorCode::kParse, where() + "record is not an object");
  if (!j.contains("text") || !j["text"].is_string()) {
    Fail(ErrorCode::kParse, where() + "missing string field 'text'");
  }
  if (!j.contains("label") || !j["label"].is_number_integer()) {
    Fail(ErrorCode::kParse, where() + "missing integer field 'label'");
  }
  Document doc;
  doc.text = j["text"].get<std::string>();
  doc.label = j["label"].get<int>();
  if (doc.label < 0) Fail(ErrorCode::kValidation, where() + "negative label");
  if (j.contains("attributes")) {
    const json& attrs = j["attributes"];
    if (!attrs.is_object()) {
      Fail(ErrorCode::kParse, where() + "'attributes' is not an object");
    }
    for (auto it = attrs.begin(); it != attrs.end(); ++it) {
      if (!it.value().is_number_integer()) {
        Fail(ErrorCode::kParse,
             where() + "attribute '" + it.key() + "' is not an integer");
      }
      doc.attributes[it.key()] = it.value().get<int>();
    }
  }
  return doc;
}

}  // namespace

Dataset ParseJsonl(const std::string& contents, const std::string& source) {
  Dataset ds;
  std::istringstream in(contents);
  std::string line;
  size_t line_no = 0;
  int declared_k = 0;
  bool declared_names = false;
  std::set<std::string> seen_names;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kParse, source + ": line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
    if (ds.documents.empty() && declared_k == 0 && j.is_object() &&
        j.contains("num_classes") && !j.contains("text")) {
      if (!j["num_classes"].is_number_integer()) {
        Fail(ErrorCode::kParse, source + ": line " + std::to_string(line_no) +
                                    ": num_classes is not an integer");
      }
      declared_k = j["num_classes"].get<int>();
      if (declared_k < 2) {
        Fail(ErrorCode::kValidation, source + ": declared num_classes < 2");
      }
      if (j.contains("attribute_names")) {
        declared_names = true;
        for (const auto& name : j["attribute_names"]) {
          ds.attribute_names.push_back(name.get<std::string>());
        }
      }
      continue;
    }
    try {
      Document doc = ParseRecord(j, line_no);
      if (declared_k > 0 && doc.label >= declared_k) {
        Fail(ErrorCode::kValidation,
             "line " + std::to_string(line_no) + ": label " +
                 std::to_string(doc.label) + " >= declared num_classes " +
                 std::to_string(declared_k));
      }
      for (const auto& [name, value] : doc.attributes) seen_names.insert(name);
      ds.documents.push_back(std::move(doc));
    } catch (const Error& e) {
      throw Error(e.code(), source + ": " + e.what());
    }
  }
  if (ds.documents.empty()) {
    Fail(ErrorCode::kValidation, source + ": empty dataset");
  }
  if (declared_k > 0) {
    ds.num_classes = declared_k;
  } else {
    int max_label = 0;
    for (const auto& doc : ds.documents) max_label = std::max(max_label, doc.label);
    ds.num_classes = std::max(2, max_label + 1);
  }
  if (!declared_names) {
    ds.attribute_names.assign(seen_names.begin(), seen_names.end());
  }
  // Absent attributes are stored explicitly as unknown.
  for (auto& doc : ds.documents) {
    for (const auto& name : ds.attribute_names) {
      doc.attributes.emplace(name, kUnknownAttribute);
    }
  }
  ds.Validate();
  return ds;
}

Dataset LoadJsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open corpus file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseJsonl(buffer.str(), path);
}

std::string FormatJsonl(const Dataset& ds) {
  std::string out;
  json header = {{"num_classes", ds.num_classes},
                 {"attribute_names", ds.attribute_names}};
  out += header.dump();
  out += '\n';
  for (const Document& doc : ds.documents) {
    json attrs = json::object();
    for (const auto& [name, value] : doc.attributes) {
      if (value != kUnknownAttribute) attrs[name] = value;
    }
    json record = {{"text", doc.text}, {"label", doc.label}, {"attributes", attrs}};
    out += record.dump();
    out += '\n';
  }
  return out;
}

void SaveJsonl(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write corpus file: " + path);
  out << FormatJsonl(ds);
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

namespace {

Dataset Subset(const Dataset& ds, std::vector<size_t> indices) {
  std::sort(indices.begin(), indices.end());
  Dataset out;
  out.num_classes = ds.num_classes;
  out.attribute_names = ds.attribute_names;
  out.documents.reserve(indices.size());
  for (size_t i : indices) out.documents.push_back(ds.documents[i]);
  return out;
}

}  // namespace

DatasetSplit Split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.aux_fraction > 0.0 && spec.aux_fraction < 1.0)) {
    Fail(ErrorCode::kConfig, "aux_fraction must lie in (0, 1)");
  }
  const size_t n = ds.size();
  if (n < 10) {
    Fail(ErrorCode::kValidation,
         "split needs at least 10 documents, got " + std::to_string(n));
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(spec.seed);
  rng.Shuffle(std::span<size_t>(order));

  const auto n_aux = static_cast<size_t>(
      std::floor(spec.aux_fraction * static_cast<double>(n)));
  const size_t rest = n - n_aux;
  const size_t n_victim = rest - rest / 2;

  auto begin = order.begin();
  DatasetSplit split;
  split.aux = Subset(ds, {begin, begin + n_aux});
  split.victim = Subset(ds, {begin + n_aux, begin + n_aux + n_victim});
  split.query = Subset(ds, {begin + n_aux + n_victim, order.end()});
  return split;
}

namespace {

std::unordered_set<std::string> DistinctNgrams(const Dataset& ds, int n) {
  std::unordered_set<std::string> grams;
  for (const Document& doc : ds.documents) {
    auto tokens = Tokenize(doc.text);
    if (tokens.size() < static_cast<size_t>(n)) continue;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
      grams.insert(Join(tokens, i, i + n));
    }
  }
  return grams;
}

}  // namespace

double NgramRecallOverlap(const Dataset& queries, const Dataset& test, int n) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
  auto test_grams = DistinctNgrams(test, n);
  if (test_grams.empty()) {
    Fail(ErrorCode::kUndefinedMetric,
         "no test document has at least " + std::to_string(n) + " tokens");
  }
  auto query_grams = DistinctNgrams(queries, n);
  size_t hit = 0;
  for (const auto& g : test_grams) hit += query_grams.count(g);
  return static_cast<double>(hit) / static_cast<double>(test_grams.size());
}

}  // namespace mealab
