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

#include "modeling/model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/error.h"

namespace mealab {

int Posterior::Argmax() const {
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) -
                          probs.begin());
}

double Posterior::Max() const {
  return probs.empty() ? 0.0 : *std::max_element(probs.begin(), probs.end());
}

bool Posterior::IsValid(double tolerance) const {
  if (probs.empty()) return false;
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

Posterior Posterior::OneHot(int label, size_t num_classes) {
  Posterior p{std::vector<double>(num_classes, 0.0)};
  p.probs.at(static_cast<size_t>(label)) = 1.0;
  return p;
}

Posterior Posterior::Uniform(size_t num_classes) {
  return Posterior{
      std::vector<double>(num_classes, 1.0 / static_cast<double>(num_classes))};
}

Model::Model(EncoderConfig cfg, int num_classes, Network network)
    : config_(std::move(cfg)), num_classes_(num_classes),
      network_(std::move(network)) {
  config_.Validate();
  if (num_classes_ < 2) Fail(ErrorCode::kInvalidArgument, "model needs K >= 2");
  const auto& layers = network_.layers();
  if (layers.size() != config_.hidden_dims.size() + 1 ||
      network_.input_width() != config_.hash_dim ||
      network_.output_width() != static_cast<size_t>(num_classes_)) {
    Fail(ErrorCode::kInvalidArgument, "network shape does not match config");
  }
  for (size_t l = 0; l < config_.hidden_dims.size(); ++l) {
    if (layers[l].out != config_.hidden_dims[l]) {
      Fail(ErrorCode::kInvalidArgument, "network shape does not match config");
    }
  }
}

Model Model::Create(const EncoderConfig& cfg, int num_classes, uint64_t seed) {
  cfg.Validate();
  std::vector<size_t> widths{cfg.hash_dim};
  widths.insert(widths.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  widths.push_back(static_cast<size_t>(num_classes));
  return Model(cfg, num_classes, Network::Random(widths, seed));
}

Model Model::FromEncoder(const EncoderConfig& cfg,
                         std::vector<Layer> encoder_layers, int num_classes) {
  encoder_layers.emplace_back(cfg.repr_dim(), static_cast<size_t>(num_classes));
  return Model(cfg, num_classes, Network(std::move(encoder_layers)));
}

std::vector<Layer> Model::EncoderLayers() const {
  const auto& layers = network_.layers();
  return {layers.begin(), layers.end() - 1};
}

SparseVector Model::Encode(std::string_view text) const {
  SparseVector x = Featurize(text, config_);
  const double norm = x.Norm();
  if (norm > 0.0) {
    for (double& v : x.values) v /= norm;
  }
  return x;
}

std::vector<double> Model::Logits(std::string_view text) const {
  return network_.Logits(Encode(text));
}

Posterior Model::Predict(std::string_view text) const {
  return Posterior{Softmax(Logits(text))};
}

std::vector<double> Model::Representation(std::string_view text) const {
  return network_.Representation(Encode(text));
}

std::vector<double> Model::LogitsFromRepresentation(
    std::span<const double> h) const {
  return network_.HeadLogits(h);
}

namespace {

constexpr char kMagic[8] = {'M', 'E', 'A', 'L', 'A', 'B', 'M', 'D'};
constexpr uint32_t kFormatVersion = 1;

class Writer {
 public:
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Raw(const char* data, size_t n) { out_.append(data, n); }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  uint64_t U64() {
    Need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(in_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string_view Raw(size_t n) {
    Need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void Need(size_t n) {
    if (pos_ + n > in_.size()) Fail(ErrorCode::kParse, "model file truncated");
  }
  std::string_view in_;
  size_t pos_ = 0;
};

}  // namespace

std::string Model::Serialize() const {
  Writer w;
  w.Raw(kMagic, sizeof(kMagic));
  w.U64(kFormatVersion);
  w.U64(config_.hash_dim);
  w.U64(config_.hash_seed);
  w.U64(config_.hidden_dims.size());
  for (size_t d : config_.hidden_dims) w.U64(d);
  w.U64(config_.ngram_orders.size());
  for (int n : config_.ngram_orders) w.U64(static_cast<uint64_t>(n));
  w.U64(static_cast<uint64_t>(num_classes_));
  for (const Layer& layer : network_.layers()) {
    w.U64(layer.in);
    w.U64(layer.out);
    for (double v : layer.weights) w.F64(v);
    for (double v : layer.bias) w.F64(v);
  }
  return w.Take();
}

Model Model::Deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.Raw(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    Fail(ErrorCode::kParse, "not a model file (bad magic)");
  }
  const uint64_t version = r.U64();
  if (version != kFormatVersion) {
    Fail(ErrorCode::kParse,
         "unsupported model format version " + std::to_string(version));
  }
  EncoderConfig cfg;
  cfg.hash_dim = r.U64();
  cfg.hash_seed = r.U64();
  const uint64_t n_hidden = r.U64();
  if (n_hidden > 64) Fail(ErrorCode::kParse, "model file corrupt");
  cfg.hidden_dims.resize(n_hidden);
  for (auto& d : cfg.hidden_dims) d = r.U64();
  const uint64_t n_orders = r.U64();
  if (n_orders > 64) Fail(ErrorCode::kParse, "model file corrupt");
  cfg.ngram_orders.resize(n_orders);
  for (auto& n : cfg.ngram_orders) n = static_cast<int>(r.U64());
  const auto num_classes = static_cast<int>(r.U64());
  cfg.Validate();
  std::vector<Layer> layers;
  for (size_t l = 0; l <= n_hidden; ++l) {
    const uint64_t in = r.U64();
    const uint64_t out = r.U64();
    if (in == 0 || out == 0 || in > (1ULL << 31) || out > (1ULL << 20)) {
      Fail(ErrorCode::kParse, "model file corrupt");
    }
    Layer layer(in, out);
    for (double& v : layer.weights) v = r.F64();
    for (double& v : layer.bias) v = r.F64();
    layers.push_back(std::move(layer));
  }
  if (!r.done()) Fail(ErrorCode::kParse, "trailing bytes in model file");
  return Model(std::move(cfg), num_classes, Network(std::move(layers)));
}

void Model::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write model file: " + path);
  const std::string bytes = Serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

Model Model::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open model file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Deserialize(buffer.str());
}

}  // namespace mealab
