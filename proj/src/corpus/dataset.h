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

#ifndef MEALAB_CORPUS_DATASET_H_
#define MEALAB_CORPUS_DATASET_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mealab {

// Attribute value recorded when a document does not declare an attribute.
inline constexpr int kUnknownAttribute = -1;

struct Document {
  std::string text;
  int label = 0;
  std::map<std::string, int> attributes;

  // Returns kUnknownAttribute when the attribute is not declared.
  int attribute(const std::string& name) const;

  bool operator==(const Document&) const = default;
};

struct Dataset {
  std::vector<Document> documents;
  int num_classes = 2;
  std::vector<std::string> attribute_names;

  size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
  bool HasAttribute(const std::string& name) const;

  // Checks K >= 2, labels in [0, K), and that every document carries a value
  // (possibly unknown) for each declared attribute. Throws kValidation.
  void Validate() const;

  bool operator==(const Dataset&) const = default;
};

// Reads one record per line: {"text": ..., "label": ..., "attributes": {...}}.
// An optional first line {"num_classes": K, "attribute_names": [...]} declares
// the label space; otherwise K = max(2, 1 + max label) and the attribute names
// are the sorted union of keys seen.
Dataset LoadJsonl(const std::string& path);
Dataset ParseJsonl(const std::string& contents, const std::string& source);

// Writes the header line followed by one record per document. Unknown
// attribute values are omitted from records.
void SaveJsonl(const Dataset& ds, const std::string& path);
std::string FormatJsonl(const Dataset& ds);

struct SplitSpec {
  double aux_fraction = 0.10;
  uint64_t seed = 0;
};

struct DatasetSplit {
  Dataset aux;     // attacker's attribute-labeled auxiliary data
  Dataset victim;  // victim training data
  Dataset query;   // attacker's same-domain query pool
};

// Partitions |ds| documents: floor(aux_fraction * n) go to aux, the remainder
// is halved with the odd document going to the victim split. Each split keeps
// the original relative document order.
DatasetSplit Split(const Dataset& ds, const SplitSpec& spec);

// Recall of the test set's distinct n-grams by the query set's distinct
// n-grams. Throws kUndefinedMetric when no test document has n tokens.
double NgramRecallOverlap(const Dataset& queries, const Dataset& test, int n);

}  // namespace mealab

#endif  // MEALAB_CORPUS_DATASET_H_
