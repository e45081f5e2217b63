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

#include "experiment/runner.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>

#include "common/error.h"
#include "common/random.h"
#include "common/text.h"
#include "experiment/report.h"
#include "mea/extraction.h"
#include "victim/client.h"
#include "victim/service.h"

namespace mealab {
namespace {

// Seed streams derived from each run seed.
enum SeedTag : uint64_t {
  kCorpusSeed = 1,
  kTestSeed,
  kPublicSeed,
  kSourceSeed,
  kSplitSeed,
  kPretrainSeed,
  kVictimSeed,
  kQuerySeed,
  kAttackerSeed,
  kAiaSeed,
};

constexpr char kAttackerClient[] = "attacker";

class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what) {}
};

// Runs `fn`, re-throwing any failure tagged with `stage`.
template <typename Fn>
auto Stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

Dataset Materialize(const CorpusSource& src, uint64_t seed) {
  if (src.synthetic) {
    SynthConfig cfg = *src.synthetic;
    cfg.seed = DeriveSeed(cfg.seed, seed);
    return GenerateSynthetic(cfg);
  }
  return LoadJsonl(src.path);
}

struct SeedContext {
  Dataset train;
  Dataset test;
  DatasetSplit split;
  std::map<std::string, Dataset> sources;  // named query sources
  std::shared_ptr<const Model> victim;
  Model attacker_init;
  Model plain_encoder;
  double victim_accuracy = 0.0;
  std::map<size_t, double> utility;  // by defense index
};

SeedContext PrepareSeed(const ExperimentConfig& cfg, uint64_t seed) {
  SeedContext ctx;
  Stage("data", [&] {
    ctx.train = Materialize(cfg.corpus.train, DeriveSeed(seed, kCorpusSeed));
    ctx.test = Materialize(cfg.corpus.test, DeriveSeed(seed, kTestSeed));
    if (ctx.test.num_classes != ctx.train.num_classes) {
      Fail(ErrorCode::kValidation, "train and test class counts differ");
    }
    ctx.split = Split(ctx.train, {cfg.split.aux_fraction,
                                  DeriveSeed(seed, kSplitSeed)});
    for (size_t i = 0; i < cfg.query_sources.size(); ++i) {
      const QuerySource& qs = cfg.query_sources[i];
      ctx.sources[qs.name] = Materialize(
          qs.corpus, DeriveSeed(DeriveSeed(seed, kSourceSeed), i));
    }
  });

  Stage("pretrain", [&] {
    const Dataset pub =
        Materialize(cfg.public_corpus, DeriveSeed(seed, kPublicSeed));
    std::vector<std::string> texts;
    texts.reserve(pub.size());
    for (const Document& d : pub.documents) texts.push_back(d.text);
    PretrainConfig pre = cfg.pretrain;
    pre.seed = DeriveSeed(seed, kPretrainSeed);
    const int k = ctx.train.num_classes;
    auto victim_layers = InitPretrained(cfg.victim_encoder, texts, pre);
    // Both parties start from the same public checkpoint when their
    // architectures match.
    auto attacker_layers = cfg.attacker_encoder == cfg.victim_encoder
                               ? victim_layers
                               : InitPretrained(cfg.attacker_encoder, texts, pre);
    ctx.attacker_init =
        Model::FromEncoder(cfg.attacker_encoder, attacker_layers, k);
    ctx.plain_encoder = ctx.attacker_init;
    Model victim_init =
        Model::FromEncoder(cfg.victim_encoder, std::move(victim_layers), k);
    Stage("victim", [&] {
      TrainConfig tc = cfg.victim_train;
      tc.seed = DeriveSeed(seed, kVictimSeed);
      std::vector<LabeledText> data;
      data.reserve(ctx.split.victim.size());
      for (const Document& d : ctx.split.victim.documents) {
        data.push_back({d.text, Posterior::OneHot(d.label, k)});
      }
      ctx.victim = std::make_shared<const Model>(Train(victim_init, data, tc));
      ctx.victim_accuracy = Accuracy(*ctx.victim, ctx.test);
    });
  });
  return ctx;
}

double DefendedUtility(const Model& victim, const DefenseConfig& defense,
                       const Dataset& test) {
  size_t correct = 0;
  for (size_t i = 0; i < test.size(); ++i) {
    const Document& doc = test.documents[i];
    const DefendedOutput out = ApplyDefense(victim.Logits(doc.text), defense, i);
    const int label = out.hard_label ? *out.hard_label : out.posterior->Argmax();
    correct += label == doc.label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

Dataset AsDataset(const std::vector<std::string>& texts) {
  Dataset ds;
  ds.documents.reserve(texts.size());
  for (const auto& t : texts) ds.documents.push_back({t, 0, {}});
  return ds;
}

void RunCell(const ExperimentConfig& cfg, SeedContext& ctx,
             ExperimentRow& row, const std::string& model_dir) {
  row.victim_accuracy = ctx.victim_accuracy;
  auto util = ctx.utility.find(row.defense_index);
  if (util == ctx.utility.end()) {
    util = ctx.utility
               .emplace(row.defense_index,
                        DefendedUtility(*ctx.victim, row.defense, ctx.test))
               .first;
  }
  row.utility = util->second;

  std::map<std::string, const Dataset*> sources{
      {kSameDomainSource, &ctx.split.query}};
  for (const auto& [name, ds] : ctx.sources) sources[name] = &ds;

  QueryPlan plan = row.plan;
  // Keyed by the plan's content, not its position, so a cell draws the same
  // queries whichever other plans share the config.
  char multiplier[32];
  std::snprintf(multiplier, sizeof(multiplier), "%.17g", plan.size_multiplier);
  plan.seed = DeriveSeed(DeriveSeed(row.seed, kQuerySeed),
                         HashString(plan.source + ":" + multiplier, 0));
  const QuerySample sample = Stage("mea", [&] {
    return SampleQueries(plan, sources, ctx.split.victim.size());
  });

  const TransferSet ts = Stage("serve", [&] {
    VictimService service(ctx.victim, row.defense);
    service.ledger().Register(kAttackerClient,
                              cfg.query_budget.value_or(sample.texts.size()));
    if (cfg.transport == Transport::kNetworked) {
      HttpServer server(service);
      const int port = server.Start("127.0.0.1", 0);
      TransferSet out;
      {
        // Closing the connection first lets Stop() return without waiting
        // out the keep-alive timeout.
        HttpClient client("127.0.0.1", port, kAttackerClient);
        out = BuildTransferSet(sample.texts, client, ctx.train.num_classes);
      }
      server.Stop();
      return out;
    }
    InProcessClient client(service, kAttackerClient);
    return BuildTransferSet(sample.texts, client, ctx.train.num_classes);
  });
  row.queries_requested = ts.queries_requested;
  row.queries_spent = ts.queries_spent;
  row.truncated = ts.truncated;
  row.with_replacement = sample.with_replacement;
  row.hard_labels = ts.provenance.hard_labels_observed;

  const Model extracted = Stage("mea", [&] {
    TrainConfig tc = cfg.attacker_train;
    tc.seed = DeriveSeed(row.seed, kAttackerSeed);
    Model m = RunExtraction(ts, ctx.attacker_init, tc);
    VictimService measure(ctx.victim, DefenseConfig{});
    row.agreement = Agreement(m, measure, ctx.test);
    row.extracted_accuracy = Accuracy(m, ctx.test);
    const Dataset queries = AsDataset(sample.texts);
    for (int n : cfg.overlap_orders) {
      try {
        row.overlap[n] = NgramRecallOverlap(queries, ctx.test, n);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUndefinedMetric) throw;
        row.overlap[n] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    std::vector<Posterior> targets;
    targets.reserve(ts.pairs.size());
    for (const auto& p : ts.pairs) targets.push_back(p.target);
    row.sharpness = MaxPosteriorStats(targets);
    return m;
  });
  if (!model_dir.empty()) {
    extracted.Save(model_dir + "/extracted_p" + std::to_string(row.plan_index) +
                   "_d" + std::to_string(row.defense_index) + "_s" +
                   std::to_string(row.seed) + ".bin");
  }

  if (!cfg.attributes.empty()) {
    row.privacy = Stage("aia", [&] {
      TrainConfig tc = cfg.aia_train;
      tc.seed = DeriveSeed(row.seed, kAiaSeed);
      return RunAia(extracted, ctx.plain_encoder, ctx.split.aux,
                    ctx.split.victim, cfg.attributes, tc);
    });
  }
}

}  // namespace

ExperimentReport RunExperiment(const ExperimentConfig& cfg,
                               const ProgressFn& progress) {
  ExperimentReport report;
  report.config_name = cfg.name;
  std::string model_dir;
  if (cfg.save_models && !cfg.output_dir.empty()) {
    model_dir = cfg.output_dir + "/models";
    std::filesystem::create_directories(model_dir);
  }

  // Seed-major so each seed's data and victim are built once; rows are
  // re-ordered to (plan, defense, seed) afterwards.
  std::vector<ExperimentRow> rows;
  for (uint64_t seed : cfg.seeds) {
    std::optional<SeedContext> ctx;
    std::string seed_error;
    try {
      ctx = PrepareSeed(cfg, seed);
      if (!model_dir.empty()) {
        ctx->victim->Save(model_dir + "/victim_s" + std::to_string(seed) +
                          ".bin");
      }
    } catch (const StageError& e) {
      seed_error = e.what();
    }
    if (progress) {
      progress("seed " + std::to_string(seed) + ": " +
               (ctx ? "victim accuracy " +
                          std::to_string(ctx->victim_accuracy)
                    : seed_error));
    }
    for (size_t p = 0; p < cfg.query_plans.size(); ++p) {
      for (size_t d = 0; d < cfg.defenses.size(); ++d) {
        ExperimentRow row;
        row.plan_index = p;
        row.defense_index = d;
        row.seed = seed;
        row.plan = cfg.query_plans[p];
        row.defense = cfg.defenses[d];
        if (!ctx) {
          row.status = seed_error;
        } else {
          try {
            RunCell(cfg, *ctx, row, model_dir);
          } catch (const StageError& e) {
            row.status = e.what();
          }
        }
        if (progress) {
          progress("  plan " + std::to_string(p) + " (" + row.plan.source +
                   " x" + std::to_string(row.plan.size_multiplier) +
                   ") defense " + row.defense.ToString() + ": " +
                   (row.ok() ? "agreement " + std::to_string(row.agreement)
                             : row.status));
        }
        rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) {
                     return std::tie(a.plan_index, a.defense_index) <
                            std::tie(b.plan_index, b.defense_index);
                   });
  report.rows = std::move(rows);
  return report;
}

namespace {

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

void WriteReport(const ExperimentReport& report, const ExperimentConfig& cfg,
                 const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  WriteFile(root / "mea.csv", FormatMeaCsv(report, cfg));
  WriteFile(root / "aia.csv", FormatAiaCsv(report));
  WriteFile(root / "defense_sweep.csv", FormatDefenseSweepCsv(report, cfg));
  WriteFile(root / "sharpness.csv", FormatSharpnessCsv(report));
  WriteFile(root / "summary.csv", FormatSummaryCsv(report));
}

std::vector<std::string> EmitSyntheticCorpora(const ExperimentConfig& cfg,
                                              const std::string& dir) {
  std::vector<std::string> written;
  auto emit = [&](const CorpusSource& src, uint64_t seed,
                  const std::string& path) {
    if (!src.synthetic) return;
    SaveJsonl(Materialize(src, seed), path);
    written.push_back(path);
  };
  for (uint64_t seed : cfg.seeds) {
    const std::filesystem::path sub =
        std::filesystem::path(dir) / ("seed_" + std::to_string(seed));
    std::filesystem::create_directories(sub);
    emit(cfg.corpus.train, DeriveSeed(seed, kCorpusSeed),
         (sub / "train.jsonl").string());
    emit(cfg.corpus.test, DeriveSeed(seed, kTestSeed),
         (sub / "test.jsonl").string());
    emit(cfg.public_corpus, DeriveSeed(seed, kPublicSeed),
         (sub / "public.jsonl").string());
    for (size_t i = 0; i < cfg.query_sources.size(); ++i) {
      emit(cfg.query_sources[i].corpus,
           DeriveSeed(DeriveSeed(seed, kSourceSeed), i),
           (sub / ("source_" + cfg.query_sources[i].name + ".jsonl")).string());
    }
  }
  return written;
}

}  // namespace mealab
