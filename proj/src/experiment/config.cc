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

#include "experiment/config.h"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "common/error.h"

namespace mealab {
namespace {

class Reader {
 public:
  explicit Reader(std::string base_dir) : base_dir_(std::move(base_dir)) {}

  std::vector<ConfigIssue>& issues() { return issues_; }

  void Issue(const YAML::Node& node, const std::string& path,
             const std::string& message) {
    int line = 0;
    if (node.IsDefined()) line = node.Mark().line + 1;
    issues_.push_back({line, path, message});
  }

  bool ExpectMap(const YAML::Node& node, const std::string& path) {
    if (node.IsMap()) return true;
    Issue(node, path, "expected a mapping");
    return false;
  }

  void CheckKeys(const YAML::Node& map, const std::string& path,
                 std::initializer_list<const char*> allowed) {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) Issue(kv.first, Join(path, key), "unknown key");
    }
  }

  template <typename T>
  bool Get(const YAML::Node& map, const char* key, const std::string& path,
           T& out) {
    const YAML::Node node = map[key];
    if (!node.IsDefined() || node.IsNull()) return false;
    try {
      out = node.as<T>();
      return true;
    } catch (const YAML::Exception&) {
      Issue(node, Join(path, key), "invalid value '" + Scalar(node) + "'");
      return false;
    }
  }

  std::string ResolvePath(const std::string& p) const {
    std::filesystem::path path(p);
    if (path.is_relative() && !base_dir_.empty()) {
      path = std::filesystem::path(base_dir_) / path;
    }
    return path.lexically_normal().string();
  }

  void RequireFile(const YAML::Node& node, const std::string& path,
                   const std::string& file) {
    if (!std::filesystem::is_regular_file(file)) {
      Issue(node, path, "file not found: " + file);
    }
  }

  static std::string Join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  static std::string Scalar(const YAML::Node& node) {
    return node.IsScalar() ? node.Scalar() : std::string("<non-scalar>");
  }

  std::string base_dir_;
  std::vector<ConfigIssue> issues_;
};

void ReadAttributeSpecs(Reader& r, const YAML::Node& node,
                        const std::string& path,
                        std::vector<AttributeSpec>& out) {
  if (!node.IsSequence()) {
    r.Issue(node, path, "expected a list");
    return;
  }
  out.clear();
  for (size_t i = 0; i < node.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const YAML::Node a = node[i];
    if (!r.ExpectMap(a, p)) continue;
    r.CheckKeys(a, p, {"name", "p", "lambda", "block_size", "label_coupling"});
    AttributeSpec spec;
    if (!r.Get(a, "name", p, spec.name)) r.Issue(a, p, "missing name");
    r.Get(a, "p", p, spec.p);
    r.Get(a, "lambda", p, spec.lambda);
    r.Get(a, "block_size", p, spec.block_size);
    r.Get(a, "label_coupling", p, spec.label_coupling);
    out.push_back(spec);
  }
}

// Applies the keys present in `node` on top of `base`.
SynthConfig ReadSynth(Reader& r, const YAML::Node& node,
                      const std::string& path, const SynthConfig& base) {
  SynthConfig cfg = base;
  if (!r.ExpectMap(node, path)) return cfg;
  r.CheckKeys(node, path,
              {"vocab_size", "num_classes", "label_block_size", "lambda_label",
               "attributes", "min_length", "max_length", "num_docs", "seed",
               "domain", "topic_overlap", "background_overlap"});
  r.Get(node, "vocab_size", path, cfg.vocab_size);
  r.Get(node, "num_classes", path, cfg.num_classes);
  r.Get(node, "label_block_size", path, cfg.label_block_size);
  r.Get(node, "lambda_label", path, cfg.lambda_label);
  r.Get(node, "min_length", path, cfg.min_length);
  r.Get(node, "max_length", path, cfg.max_length);
  r.Get(node, "num_docs", path, cfg.num_docs);
  r.Get(node, "seed", path, cfg.seed);
  r.Get(node, "domain", path, cfg.domain);
  r.Get(node, "topic_overlap", path, cfg.topic_overlap);
  r.Get(node, "background_overlap", path, cfg.background_overlap);
  if (node["attributes"].IsDefined()) {
    ReadAttributeSpecs(r, node["attributes"], Reader::Join(path, "attributes"),
                       cfg.attributes);
  }
  try {
    cfg.Validate();
  } catch (const Error& e) {
    r.Issue(node, path, e.what());
  }
  return cfg;
}

// Either {synthetic: {...}} (inheriting `base`) or {path: file}.
CorpusSource ReadCorpusSource(Reader& r, const YAML::Node& node,
                              const std::string& path,
                              const std::optional<SynthConfig>& base,
                              std::initializer_list<const char*> extra_keys) {
  CorpusSource src;
  if (!r.ExpectMap(node, path)) return src;
  std::vector<const char*> keys{"synthetic", "path"};
  keys.insert(keys.end(), extra_keys.begin(), extra_keys.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) r.Issue(kv.first, Reader::Join(path, key), "unknown key");
  }
  const bool has_synth = node["synthetic"].IsDefined();
  const bool has_path = node["path"].IsDefined();
  if (has_synth == has_path) {
    r.Issue(node, path, "exactly one of 'synthetic' or 'path' is required");
    return src;
  }
  if (has_synth) {
    src.synthetic = ReadSynth(r, node["synthetic"],
                              Reader::Join(path, "synthetic"),
                              base.value_or(SynthConfig{}));
  } else {
    std::string file;
    r.Get(node, "path", path, file);
    src.path = r.ResolvePath(file);
    r.RequireFile(node["path"], Reader::Join(path, "path"), src.path);
  }
  return src;
}

void ReadEncoder(Reader& r, const YAML::Node& node, const std::string& path,
                 EncoderConfig& cfg) {
  if (!node.IsDefined()) return;
  if (!r.ExpectMap(node, path)) return;
  r.CheckKeys(node, path, {"hash_dim", "hidden_dims", "hash_seed",
                           "ngram_orders"});
  r.Get(node, "hash_dim", path, cfg.hash_dim);
  r.Get(node, "hidden_dims", path, cfg.hidden_dims);
  r.Get(node, "hash_seed", path, cfg.hash_seed);
  r.Get(node, "ngram_orders", path, cfg.ngram_orders);
  try {
    cfg.Validate();
  } catch (const Error& e) {
    r.Issue(node, path, e.what());
  }
}

void ReadTrain(Reader& r, const YAML::Node& node, const std::string& path,
               TrainConfig& cfg) {
  if (!node.IsDefined()) return;
  if (!r.ExpectMap(node, path)) return;
  r.CheckKeys(node, path, {"epochs", "batch_size", "learning_rate", "l2",
                           "target_mode", "freeze_encoder"});
  r.Get(node, "epochs", path, cfg.epochs);
  r.Get(node, "batch_size", path, cfg.batch_size);
  r.Get(node, "learning_rate", path, cfg.learning_rate);
  r.Get(node, "l2", path, cfg.l2);
  r.Get(node, "freeze_encoder", path, cfg.freeze_encoder);
  std::string mode;
  if (r.Get(node, "target_mode", path, mode)) {
    if (mode == "soft") {
      cfg.target_mode = TargetMode::kSoft;
    } else if (mode == "hard") {
      cfg.target_mode = TargetMode::kHard;
    } else {
      r.Issue(node["target_mode"], Reader::Join(path, "target_mode"),
              "expected 'soft' or 'hard'");
    }
  }
  try {
    cfg.Validate();
  } catch (const Error& e) {
    r.Issue(node, path, e.what());
  }
}

void ReadParty(Reader& r, const YAML::Node& node, const std::string& path,
               EncoderConfig& encoder, TrainConfig& train) {
  if (!node.IsDefined()) return;
  if (!r.ExpectMap(node, path)) return;
  r.CheckKeys(node, path, {"encoder", "train"});
  ReadEncoder(r, node["encoder"], Reader::Join(path, "encoder"), encoder);
  ReadTrain(r, node["train"], Reader::Join(path, "train"), train);
}

DefenseConfig ReadDefense(Reader& r, const YAML::Node& node,
                          const std::string& path) {
  DefenseConfig d;
  try {
    if (node.IsScalar()) {
      d = DefenseConfig::Parse(node.Scalar());
    } else if (node.IsMap()) {
      r.CheckKeys(node, path, {"mode", "tau", "sigma", "noise_seed"});
      std::string mode = "none";
      r.Get(node, "mode", path, mode);
      if (mode == "soften") {
        d.mode = DefenseMode::kSoften;
      } else if (mode == "perturb") {
        d.mode = DefenseMode::kPerturb;
      } else if (mode != "none") {
        Fail(ErrorCode::kConfig, "defense: unknown mode '" + mode + "'");
      }
      r.Get(node, "tau", path, d.tau);
      r.Get(node, "sigma", path, d.sigma);
      r.Get(node, "noise_seed", path, d.noise_seed);
    } else {
      r.Issue(node, path, "expected a defense string or mapping");
      return d;
    }
    d.Validate();
  } catch (const Error& e) {
    r.Issue(node, path, e.what());
  }
  return d;
}

}  // namespace

std::string ConfigIssue::ToString() const {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!path.empty()) out += path + ": ";
  return out + message;
}

std::string ConfigParse::Describe() const {
  std::string out;
  for (const auto& issue : issues) out += issue.ToString() + "\n";
  return out;
}

const char* TransportName(Transport t) {
  return t == Transport::kNetworked ? "networked" : "in_process";
}

ConfigParse ParseExperimentConfig(const std::string& text,
                                  const std::string& base_dir) {
  ConfigParse result;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    result.issues.push_back({e.mark.line + 1, "", e.msg});
    return result;
  }
  Reader r(base_dir);
  ExperimentConfig cfg;
  if (!root.IsMap()) {
    result.issues.push_back({0, "", "config must be a mapping"});
    return result;
  }
  r.CheckKeys(root, "",
              {"name", "corpus", "split", "public_corpus", "pretrain", "victim",
               "attacker", "aia", "attributes", "query_sources", "query_plans",
               "defenses", "seeds", "overlap_orders", "query_budget",
               "sweep_plan", "output_dir", "transport", "save_models"});
  r.Get(root, "name", "", cfg.name);

  // corpus
  const YAML::Node corpus = root["corpus"];
  if (!corpus.IsDefined()) {
    r.Issue(root, "corpus", "missing");
  } else if (r.ExpectMap(corpus, "corpus")) {
    if (corpus["synthetic"].IsDefined()) {
      r.CheckKeys(corpus, "corpus", {"synthetic", "test_docs"});
      SynthConfig synth =
          ReadSynth(r, corpus["synthetic"], "corpus.synthetic", SynthConfig{});
      cfg.corpus.train.synthetic = synth;
      SynthConfig test = synth;
      test.num_docs = 1000;
      r.Get(corpus, "test_docs", "corpus", test.num_docs);
      if (test.num_docs == 0) {
        r.Issue(corpus["test_docs"], "corpus.test_docs", "must be positive");
      }
      cfg.corpus.test.synthetic = test;
    } else {
      r.CheckKeys(corpus, "corpus", {"train", "test"});
      for (const char* key : {"train", "test"}) {
        std::string file;
        const std::string p = std::string("corpus.") + key;
        if (!r.Get(corpus, key, "corpus", file)) {
          r.Issue(corpus, p, "missing (or give 'synthetic')");
          continue;
        }
        CorpusSource& src =
            std::string(key) == "train" ? cfg.corpus.train : cfg.corpus.test;
        src.path = r.ResolvePath(file);
        r.RequireFile(corpus[key], p, src.path);
      }
    }
  }
  const std::optional<SynthConfig>& base_synth = cfg.corpus.train.synthetic;

  // split
  if (const YAML::Node split = root["split"]; split.IsDefined()) {
    if (r.ExpectMap(split, "split")) {
      r.CheckKeys(split, "split", {"aux_fraction"});
      r.Get(split, "aux_fraction", "split", cfg.split.aux_fraction);
      if (!(cfg.split.aux_fraction > 0.0 && cfg.split.aux_fraction < 1.0)) {
        r.Issue(split, "split.aux_fraction", "must lie in (0, 1)");
      }
    }
  }

  // public corpus and pretraining
  if (const YAML::Node pub = root["public_corpus"]; pub.IsDefined()) {
    cfg.public_corpus =
        ReadCorpusSource(r, pub, "public_corpus", base_synth, {});
  } else if (base_synth) {
    SynthConfig pub_synth = *base_synth;
    pub_synth.domain = "public";
    cfg.public_corpus.synthetic = pub_synth;
  } else {
    r.Issue(root, "public_corpus", "required when the corpus is not synthetic");
  }
  if (const YAML::Node pre = root["pretrain"]; pre.IsDefined()) {
    if (r.ExpectMap(pre, "pretrain")) {
      r.CheckKeys(pre, "pretrain",
                  {"epochs", "batch_size", "learning_rate", "proxy_buckets"});
      r.Get(pre, "epochs", "pretrain", cfg.pretrain.epochs);
      r.Get(pre, "batch_size", "pretrain", cfg.pretrain.batch_size);
      r.Get(pre, "learning_rate", "pretrain", cfg.pretrain.learning_rate);
      r.Get(pre, "proxy_buckets", "pretrain", cfg.pretrain.proxy_buckets);
      if (cfg.pretrain.epochs < 0) {
        r.Issue(pre, "pretrain.epochs", "must be >= 0");
      }
      if (cfg.pretrain.proxy_buckets < 2) {
        r.Issue(pre, "pretrain.proxy_buckets", "must be >= 2");
      }
    }
  }

  ReadParty(r, root["victim"], "victim", cfg.victim_encoder, cfg.victim_train);
  ReadParty(r, root["attacker"], "attacker", cfg.attacker_encoder,
            cfg.attacker_train);
  if (const YAML::Node aia = root["aia"]; aia.IsDefined()) {
    if (r.ExpectMap(aia, "aia")) {
      r.CheckKeys(aia, "aia", {"train"});
      ReadTrain(r, aia["train"], "aia.train", cfg.aia_train);
    }
  }

  // attributes
  if (const YAML::Node attrs = root["attributes"]; attrs.IsDefined()) {
    if (!attrs.IsSequence()) {
      r.Issue(attrs, "attributes", "expected a list");
    } else {
      for (size_t i = 0; i < attrs.size(); ++i) {
        const std::string p = "attributes[" + std::to_string(i) + "]";
        const YAML::Node a = attrs[i];
        AttributeTarget target;
        if (a.IsScalar()) {
          target.name = a.Scalar();
        } else if (r.ExpectMap(a, p)) {
          r.CheckKeys(a, p, {"name", "kind"});
          if (!r.Get(a, "name", p, target.name)) r.Issue(a, p, "missing name");
          std::string kind;
          if (r.Get(a, "kind", p, kind)) {
            try {
              target.kind = ParseAttributeKind(kind);
            } catch (const Error& e) {
              r.Issue(a["kind"], p + ".kind", e.what());
            }
          }
        }
        if (base_synth) {
          bool declared = false;
          for (const auto& s : base_synth->attributes) {
            declared = declared || s.name == target.name;
          }
          if (!declared) {
            r.Issue(a, p, "attribute '" + target.name +
                              "' is not generated by corpus.synthetic");
          }
        }
        cfg.attributes.push_back(target);
      }
    }
  }

  // query sources
  std::set<std::string> source_names{kSameDomainSource};
  if (const YAML::Node qs = root["query_sources"]; qs.IsDefined()) {
    if (!qs.IsSequence()) {
      r.Issue(qs, "query_sources", "expected a list");
    } else {
      for (size_t i = 0; i < qs.size(); ++i) {
        const std::string p = "query_sources[" + std::to_string(i) + "]";
        const YAML::Node q = qs[i];
        if (!r.ExpectMap(q, p)) continue;
        QuerySource src;
        if (!r.Get(q, "name", p, src.name)) r.Issue(q, p, "missing name");
        if (!source_names.insert(src.name).second) {
          r.Issue(q, p, "duplicate or reserved source name '" + src.name + "'");
        }
        src.corpus = ReadCorpusSource(r, q, p, base_synth, {"name"});
        cfg.query_sources.push_back(std::move(src));
      }
    }
  }

  // query plans
  const YAML::Node plans = root["query_plans"];
  if (!plans.IsDefined()) {
    cfg.query_plans.push_back(QueryPlan{});
  } else if (!plans.IsSequence() || plans.size() == 0) {
    r.Issue(plans, "query_plans", "empty");
  } else {
    for (size_t i = 0; i < plans.size(); ++i) {
      const std::string p = "query_plans[" + std::to_string(i) + "]";
      const YAML::Node q = plans[i];
      if (!r.ExpectMap(q, p)) continue;
      r.CheckKeys(q, p, {"source", "multiplier"});
      QueryPlan plan;
      r.Get(q, "source", p, plan.source);
      r.Get(q, "multiplier", p, plan.size_multiplier);
      if (!source_names.contains(plan.source)) {
        r.Issue(q, p + ".source", "unknown query source '" + plan.source + "'");
      }
      if (!(plan.size_multiplier > 0.0)) {
        r.Issue(q, p + ".multiplier", "must be positive");
      }
      cfg.query_plans.push_back(plan);
    }
  }

  // defenses
  const YAML::Node defenses = root["defenses"];
  if (!defenses.IsDefined()) {
    cfg.defenses.push_back(DefenseConfig{});
  } else if (!defenses.IsSequence() || defenses.size() == 0) {
    r.Issue(defenses, "defenses", "empty");
  } else {
    for (size_t i = 0; i < defenses.size(); ++i) {
      cfg.defenses.push_back(ReadDefense(
          r, defenses[i], "defenses[" + std::to_string(i) + "]"));
    }
  }

  // seeds
  const YAML::Node seeds = root["seeds"];
  if (!seeds.IsDefined() || !seeds.IsSequence() || seeds.size() == 0) {
    r.Issue(seeds.IsDefined() ? seeds : root, "seeds", "empty");
  } else {
    r.Get(root, "seeds", "", cfg.seeds);
    std::set<uint64_t> unique(cfg.seeds.begin(), cfg.seeds.end());
    if (unique.size() != cfg.seeds.size()) {
      r.Issue(seeds, "seeds", "duplicate seed");
    }
  }

  if (r.Get(root, "overlap_orders", "", cfg.overlap_orders)) {
    for (int n : cfg.overlap_orders) {
      if (n < 1) r.Issue(root["overlap_orders"], "overlap_orders", "must be >= 1");
    }
  }
  uint64_t budget = 0;
  if (r.Get(root, "query_budget", "", budget)) cfg.query_budget = budget;

  if (root["sweep_plan"].IsDefined()) {
    r.Get(root, "sweep_plan", "", cfg.sweep_plan);
  } else {
    // First same-domain 1x plan, else the first plan.
    for (size_t i = 0; i < cfg.query_plans.size(); ++i) {
      if (cfg.query_plans[i].source == kSameDomainSource &&
          cfg.query_plans[i].size_multiplier == 1.0) {
        cfg.sweep_plan = i;
        break;
      }
    }
  }
  if (!cfg.query_plans.empty() && cfg.sweep_plan >= cfg.query_plans.size()) {
    r.Issue(root["sweep_plan"], "sweep_plan", "index out of range");
  }

  r.Get(root, "output_dir", "", cfg.output_dir);
  std::string transport;
  if (r.Get(root, "transport", "", transport)) {
    if (transport == "in_process") {
      cfg.transport = Transport::kInProcess;
    } else if (transport == "networked") {
      cfg.transport = Transport::kNetworked;
    } else {
      r.Issue(root["transport"], "transport",
              "expected 'in_process' or 'networked'");
    }
  }
  r.Get(root, "save_models", "", cfg.save_models);

  result.issues = std::move(r.issues());
  if (result.issues.empty()) result.config = std::move(cfg);
  return result;
}

ConfigParse ValidateExperimentConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ConfigParse result;
    result.issues.push_back({0, "", "cannot read config file " + path});
    return result;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseExperimentConfig(
      ss.str(), std::filesystem::path(path).parent_path().string());
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  ConfigParse parsed = ValidateExperimentConfigFile(path);
  if (!parsed.ok()) Fail(ErrorCode::kConfig, parsed.Describe());
  return *std::move(parsed.config);
}

}  // namespace mealab
