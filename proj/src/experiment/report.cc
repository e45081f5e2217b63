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

#include "experiment/report.h"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

namespace mealab {
namespace {

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Quotes a field when it contains a comma, quote or newline.
std::string Field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    Row(header);
  }

  void Row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << Field(fields[i]);
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::vector<std::string> CellKey(const std::string& config,
                                 const ExperimentRow& r) {
  return {std::to_string(kCsvSchemaVersion), config,
          std::to_string(r.plan_index), r.plan.source,
          Num(r.plan.size_multiplier), r.defense.ToString(),
          std::to_string(r.seed), r.status};
}

const std::vector<std::string> kCellHeader = {
    "schema_version", "config", "plan", "source", "multiplier",
    "defense", "seed", "status"};

std::vector<std::string> WithHeader(std::vector<std::string> extra) {
  std::vector<std::string> h = kCellHeader;
  h.insert(h.end(), extra.begin(), extra.end());
  return h;
}

void Append(std::vector<std::string>& row, std::vector<std::string> extra) {
  row.insert(row.end(), extra.begin(), extra.end());
}

const char* Bool(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string FormatMeaCsv(const ExperimentReport& report,
                         const ExperimentConfig& cfg) {
  std::vector<std::string> extra = {
      "queries_requested", "queries_spent",      "truncated",
      "with_replacement",  "hard_labels",        "victim_accuracy",
      "utility",           "extracted_accuracy", "agreement",
      "query_mean_max_posterior", "query_median_max_posterior",
      "privacy",           "plain_encoder_privacy", "majority_privacy"};
  for (int n : cfg.overlap_orders) {
    extra.push_back("overlap_" + std::to_string(n));
  }
  CsvWriter csv(WithHeader(extra));
  for (const ExperimentRow& r : report.rows) {
    auto row = CellKey(report.config_name, r);
    Append(row, {std::to_string(r.queries_requested),
                 std::to_string(r.queries_spent), Bool(r.truncated),
                 Bool(r.with_replacement), Bool(r.hard_labels),
                 Num(r.victim_accuracy), Num(r.utility),
                 Num(r.extracted_accuracy), Num(r.agreement),
                 Num(r.sharpness.mean), Num(r.sharpness.median),
                 Num(r.privacy.headline().extracted),
                 Num(r.privacy.headline().plain_encoder),
                 Num(r.privacy.headline().majority)});
    for (int n : cfg.overlap_orders) {
      auto it = r.overlap.find(n);
      row.push_back(Num(it == r.overlap.end()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : it->second));
    }
    csv.Row(row);
  }
  return csv.str();
}

std::string FormatAiaCsv(const ExperimentReport& report) {
  CsvWriter csv(WithHeader(
      {"attribute", "kind", "attack_score", "privacy",
       "plain_encoder_privacy", "majority_privacy", "majority_value",
       "degenerate", "attribute_std"}));
  for (const ExperimentRow& r : report.rows) {
    for (const AttributePrivacy& a : r.privacy.attributes) {
      auto row = CellKey(report.config_name, r);
      Append(row, {a.name, AttributeKindName(a.kind),
                   Num(a.extracted.attack_score), Num(a.extracted.privacy),
                   Num(a.plain_encoder.privacy), Num(a.majority.privacy),
                   std::to_string(a.majority_value),
                   Bool(a.extracted.degenerate), Num(a.attribute_std)});
      csv.Row(row);
    }
    // Aggregates carry the kind in the attribute column.
    auto aggregate = [&](const char* name,
                         const std::optional<AggregatePrivacy>& agg) {
      if (!agg) return;
      auto row = CellKey(report.config_name, r);
      Append(row, {name, "aggregate", Num(1.0 - agg->extracted),
                   Num(agg->extracted), Num(agg->plain_encoder),
                   Num(agg->majority), "", "", ""});
      csv.Row(row);
    };
    aggregate("demographic", r.privacy.demographic);
    aggregate("entity", r.privacy.entity);
    if (!r.ok() && r.privacy.attributes.empty()) {
      auto row = CellKey(report.config_name, r);
      Append(row, {"", "", "", "", "", "", "", "", ""});
      csv.Row(row);
    }
  }
  return csv.str();
}

std::string FormatDefenseSweepCsv(const ExperimentReport& report,
                                  const ExperimentConfig& cfg) {
  CsvWriter csv({"schema_version", "config", "defense", "mode", "tau", "sigma",
                 "seed", "status", "utility", "agreement",
                 "extracted_accuracy", "privacy", "plain_encoder_privacy",
                 "majority_privacy"});
  for (const ExperimentRow& r : report.rows) {
    if (r.plan_index != cfg.sweep_plan) continue;
    const AggregatePrivacy p = r.privacy.headline();
    csv.Row({std::to_string(kCsvSchemaVersion), report.config_name,
             r.defense.ToString(), DefenseModeName(r.defense.mode),
             Num(r.defense.tau), Num(r.defense.sigma), std::to_string(r.seed),
             r.status, Num(r.utility), Num(r.agreement),
             Num(r.extracted_accuracy), Num(p.extracted),
             Num(p.plain_encoder), Num(p.majority)});
  }
  return csv.str();
}

std::string FormatSharpnessCsv(const ExperimentReport& report) {
  CsvWriter csv(WithHeader({"bin", "bin_lower", "bin_upper", "query_count",
                            "eval_records", "eval_privacy"}));
  for (const ExperimentRow& r : report.rows) {
    const size_t bins = std::max(r.sharpness.histogram.size(),
                                 r.privacy.sharpness_bins.size());
    if (bins == 0) {
      auto row = CellKey(report.config_name, r);
      Append(row, {"", "", "", "", "", ""});
      csv.Row(row);
      continue;
    }
    for (size_t b = 0; b < bins; ++b) {
      auto row = CellKey(report.config_name, r);
      const bool has_query = b < r.sharpness.histogram.size();
      const bool has_eval = b < r.privacy.sharpness_bins.size();
      const double lower = has_eval ? r.privacy.sharpness_bins[b].lower
                                    : r.sharpness.bin_lower(b);
      const double upper = has_eval ? r.privacy.sharpness_bins[b].upper
                                    : r.sharpness.bin_upper(b);
      Append(row,
             {std::to_string(b), Num(lower), Num(upper),
              has_query ? std::to_string(r.sharpness.histogram[b]) : "",
              has_eval ? std::to_string(r.privacy.sharpness_bins[b].records)
                       : "",
              has_eval ? Num(r.privacy.sharpness_bins[b].privacy) : ""});
      csv.Row(row);
    }
  }
  return csv.str();
}

std::string FormatSummaryCsv(const ExperimentReport& report) {
  struct Acc {
    const ExperimentRow* first = nullptr;
    size_t n = 0;
    double utility = 0, agreement = 0, accuracy = 0, privacy = 0, plain = 0,
           majority = 0, sharpness = 0;
  };
  std::map<std::pair<size_t, size_t>, Acc> cells;
  for (const ExperimentRow& r : report.rows) {
    Acc& a = cells[{r.plan_index, r.defense_index}];
    if (a.first == nullptr) a.first = &r;
    if (!r.ok()) continue;
    const AggregatePrivacy p = r.privacy.headline();
    ++a.n;
    a.utility += r.utility;
    a.agreement += r.agreement;
    a.accuracy += r.extracted_accuracy;
    a.privacy += p.extracted;
    a.plain += p.plain_encoder;
    a.majority += p.majority;
    a.sharpness += r.sharpness.mean;
  }
  CsvWriter csv({"schema_version", "config", "plan", "source", "multiplier",
                 "defense", "seeds_ok", "utility", "agreement",
                 "extracted_accuracy", "privacy", "plain_encoder_privacy",
                 "majority_privacy", "mean_max_posterior"});
  for (const auto& [key, a] : cells) {
    const double n = a.n > 0 ? static_cast<double>(a.n)
                             : std::numeric_limits<double>::quiet_NaN();
    csv.Row({std::to_string(kCsvSchemaVersion), report.config_name,
             std::to_string(key.first), a.first->plan.source,
             Num(a.first->plan.size_multiplier), a.first->defense.ToString(),
             std::to_string(a.n), Num(a.utility / n), Num(a.agreement / n),
             Num(a.accuracy / n), Num(a.privacy / n), Num(a.plain / n),
             Num(a.majority / n), Num(a.sharpness / n)});
  }
  return csv.str();
}

}  // namespace mealab
