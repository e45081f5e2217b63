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

#include "corpus/synthetic.h"

#include <array>
#include <cmath>

#include "common/error.h"
#include "common/random.h"

namespace mealab {

void SynthConfig::Validate() const {
  auto bad = [](const std::string& msg) { Fail(ErrorCode::kConfig, msg); };
  if (num_classes < 2) bad("synthetic: num_classes must be >= 2");
  if (label_block_size == 0) bad("synthetic: label_block_size must be > 0");
  if (!(lambda_label >= 0.0)) bad("synthetic: lambda_label must be >= 0");
  if (min_length == 0 || max_length < min_length) {
    bad("synthetic: need 1 <= min_length <= max_length");
  }
  if (num_docs == 0) bad("synthetic: num_docs must be > 0");
  if (!(topic_overlap >= 0.0 && topic_overlap <= 1.0) ||
      !(background_overlap >= 0.0 && background_overlap <= 1.0)) {
    bad("synthetic: overlaps must lie in [0, 1]");
  }
  if (domain.empty() && (topic_overlap < 1.0 || background_overlap < 1.0)) {
    bad("synthetic: overlap < 1 requires a non-empty domain");
  }
  size_t reserved = static_cast<size_t>(num_classes) * label_block_size;
  for (const AttributeSpec& a : attributes) {
    if (a.name.empty()) bad("synthetic: attribute with empty name");
    if (!(a.p >= 0.0 && a.p <= 1.0)) {
      bad("synthetic: attribute '" + a.name + "' p must lie in [0, 1]");
    }
    if (!(a.lambda >= 0.0) || !(a.label_coupling >= 0.0)) {
      bad("synthetic: attribute '" + a.name + "' strengths must be >= 0");
    }
    if (a.block_size == 0) {
      bad("synthetic: attribute '" + a.name + "' block_size must be > 0");
    }
    reserved += 2 * a.block_size;
  }
  if (vocab_size <= reserved) {
    bad("synthetic: vocab_size " + std::to_string(vocab_size) +
        " too small for disjoint blocks (need > " + std::to_string(reserved) +
        ")");
  }
}

std::vector<int> PreferredClasses(int num_classes, size_t attribute_index,
                                  int value) {
  int bits = 0;
  while ((1 << bits) < num_classes) ++bits;
  const int bit = static_cast<int>(attribute_index % static_cast<size_t>(bits));
  std::vector<int> out;
  for (int k = 0; k < num_classes; ++k) {
    if (((k >> bit) & 1) == value) out.push_back(k);
  }
  return out;
}

namespace {

struct Block {
  size_t begin;
  size_t size;
  double overlap;
};

class Vocabulary {
 public:
  explicit Vocabulary(const SynthConfig& cfg) : cfg_(cfg) {
    size_t next = 0;
    for (int k = 0; k < cfg.num_classes; ++k) {
      class_blocks_.push_back({next, cfg.label_block_size, cfg.topic_overlap});
      next += cfg.label_block_size;
    }
    for (const AttributeSpec& a : cfg.attributes) {
      attribute_blocks_.push_back(std::array<Block, 2>{
          Block{next, a.block_size, cfg.topic_overlap},
          Block{next + a.block_size, a.block_size, cfg.topic_overlap}});
      next += 2 * a.block_size;
    }
    background_ = {next, cfg.vocab_size - next, cfg.background_overlap};
    spelling_.resize(cfg.vocab_size);
    for (const Block& b : class_blocks_) Spell(b);
    for (const auto& pair : attribute_blocks_) {
      Spell(pair[0]);
      Spell(pair[1]);
    }
    Spell(background_);
  }

  const Block& class_block(int k) const { return class_blocks_[k]; }
  const Block& attribute_block(size_t a, int v) const {
    return attribute_blocks_[a][v];
  }
  const Block& background() const { return background_; }
  const std::string& spelling(size_t token) const { return spelling_[token]; }

 private:
  void Spell(const Block& b) {
    const auto kept = static_cast<size_t>(
        std::llround(b.overlap * static_cast<double>(b.size)));
    for (size_t i = 0; i < b.size; ++i) {
      const size_t t = b.begin + i;
      std::string canonical = "w" + std::to_string(t);
      spelling_[t] = (cfg_.domain.empty() || i < kept)
                         ? canonical
                         : cfg_.domain + "_" + canonical;
    }
  }

  const SynthConfig& cfg_;
  std::vector<Block> class_blocks_;
  std::vector<std::array<Block, 2>> attribute_blocks_;
  Block background_{};
  std::vector<std::string> spelling_;
};

int SampleCategorical(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.Uniform() * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace

Dataset GenerateSynthetic(const SynthConfig& cfg) {
  cfg.Validate();
  Vocabulary vocab(cfg);
  Rng rng(cfg.seed);
  const int k_classes = cfg.num_classes;

  std::vector<std::array<std::vector<int>, 2>> preferred;
  for (size_t a = 0; a < cfg.attributes.size(); ++a) {
    preferred.push_back({PreferredClasses(k_classes, a, 0),
                         PreferredClasses(k_classes, a, 1)});
  }

  Dataset ds;
  ds.num_classes = k_classes;
  for (const AttributeSpec& a : cfg.attributes) ds.attribute_names.push_back(a.name);
  ds.documents.reserve(cfg.num_docs);

  std::vector<const Block*> segments;
  std::vector<double> masses;
  for (size_t d = 0; d < cfg.num_docs; ++d) {
    Document doc;
    std::vector<int> values(cfg.attributes.size());
    std::vector<double> label_logits(k_classes, 0.0);
    for (size_t a = 0; a < cfg.attributes.size(); ++a) {
      const AttributeSpec& spec = cfg.attributes[a];
      values[a] = rng.Bernoulli(spec.p) ? 1 : 0;
      doc.attributes[spec.name] = values[a];
      for (int k : preferred[a][values[a]]) {
        label_logits[k] += spec.lambda * spec.label_coupling;
      }
    }
    std::vector<double> label_weights(k_classes);
    for (int k = 0; k < k_classes; ++k) label_weights[k] = std::exp(label_logits[k]);
    doc.label = SampleCategorical(label_weights, rng);

    // Every token has base weight 1; tilted blocks carry exp(lambda) each.
    segments.clear();
    masses.clear();
    for (int k = 0; k < k_classes; ++k) {
      const Block& b = vocab.class_block(k);
      segments.push_back(&b);
      masses.push_back(static_cast<double>(b.size) *
                       (k == doc.label ? std::exp(cfg.lambda_label) : 1.0));
    }
    for (size_t a = 0; a < cfg.attributes.size(); ++a) {
      for (int v = 0; v < 2; ++v) {
        const Block& b = vocab.attribute_block(a, v);
        segments.push_back(&b);
        masses.push_back(static_cast<double>(b.size) *
                         (v == values[a] ? std::exp(cfg.attributes[a].lambda)
                                         : 1.0));
      }
    }
    segments.push_back(&vocab.background());
    masses.push_back(static_cast<double>(vocab.background().size));

    const size_t length =
        cfg.min_length + rng.UniformInt(cfg.max_length - cfg.min_length + 1);
    for (size_t i = 0; i < length; ++i) {
      const Block& b = *segments[SampleCategorical(masses, rng)];
      const size_t token = b.begin + rng.UniformInt(b.size);
      if (i > 0) doc.text.push_back(' ');
      doc.text += vocab.spelling(token);
    }
    ds.documents.push_back(std::move(doc));
  }
  return ds;
}

}  // namespace mealab
