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

#include "mea/extraction.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.h"
#include "common/random.h"

namespace mealab {

QuerySample SampleQueries(const QueryPlan& plan,
                          const std::map<std::string, const Dataset*>& sources,
                          size_t victim_train_size) {
  auto it = sources.find(plan.source);
  if (it == sources.end() || it->second == nullptr) {
    Fail(ErrorCode::kConfig, "unknown query source '" + plan.source + "'");
  }
  const Dataset& source = *it->second;
  if (!(plan.size_multiplier > 0.0)) {
    Fail(ErrorCode::kConfig, "query size multiplier must be > 0");
  }
  const auto m = static_cast<size_t>(std::llround(
      plan.size_multiplier * static_cast<double>(victim_train_size)));
  if (m == 0) Fail(ErrorCode::kConfig, "query plan yields zero queries");
  if (source.empty()) {
    Fail(ErrorCode::kConfig, "query source '" + plan.source + "' is empty");
  }

  Rng rng(plan.seed);
  QuerySample sample;
  sample.texts.reserve(m);
  if (m <= source.size()) {
    std::vector<size_t> order(source.size());
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(std::span<size_t>(order));
    for (size_t i = 0; i < m; ++i) {
      sample.texts.push_back(source.documents[order[i]].text);
    }
  } else {
    sample.with_replacement = true;
    for (size_t i = 0; i < m; ++i) {
      sample.texts.push_back(source.documents[rng.UniformInt(source.size())].text);
    }
  }
  return sample;
}

TransferSet BuildTransferSet(const std::vector<std::string>& queries,
                             PredictionClient& client, int num_classes,
                             size_t batch_size) {
  if (batch_size == 0) batch_size = 1;
  TransferSet ts;
  ts.queries_requested = queries.size();
  const auto k = static_cast<size_t>(num_classes);

  auto append = [&](std::span<const std::string> batch,
                    const QueryResult& result) {
    if (result.responses.size() != batch.size()) {
      Fail(ErrorCode::kProtocol, "victim returned a misaligned batch");
    }
    for (size_t i = 0; i < batch.size(); ++i) {
      const PredictionResponse& r = result.responses[i];
      Posterior target;
      if (r.hard_label) {
        if (*r.hard_label < 0 || static_cast<size_t>(*r.hard_label) >= k) {
          Fail(ErrorCode::kProtocol, "hard label outside [0, K)");
        }
        target = Posterior::OneHot(*r.hard_label, k);
        ts.provenance.hard_labels_observed = true;
      } else {
        target = *r.posterior;
        if (target.num_classes() != k || !target.IsValid()) {
          Fail(ErrorCode::kProtocol, "victim returned an invalid posterior");
        }
      }
      ts.pairs.push_back({batch[i], std::move(target)});
    }
    ts.queries_spent += batch.size();
  };
  auto check = [](const QueryResult& result) {
    if (result.status == QueryStatus::kProtocolError) {
      Fail(ErrorCode::kProtocol, "victim rejected request: " + result.error);
    }
    if (result.status != QueryStatus::kOk) {
      Fail(ErrorCode::kTransport, "victim query failed: " + result.error);
    }
  };

  for (size_t next = 0; next < queries.size();) {
    std::span<const std::string> batch(
        queries.data() + next, std::min(batch_size, queries.size() - next));
    QueryResult result = client.Query(batch);
    if (result.status == QueryStatus::kBudgetExceeded) {
      // Spend whatever allowance is left, then stop.
      ts.truncated = true;
      if (result.queries_remaining > 0) {
        batch = batch.first(
            std::min<size_t>(batch.size(), result.queries_remaining));
        result = client.Query(batch);
        if (result.status == QueryStatus::kOk) append(batch, result);
      }
      break;
    }
    check(result);
    append(batch, result);
    next += batch.size();
  }
  return ts;
}

Model RunExtraction(const TransferSet& ts, const Model& attacker_init,
                    const TrainConfig& tc) {
  if (ts.pairs.empty()) Fail(ErrorCode::kAttack, "empty transfer set");
  return Train(attacker_init, ts.pairs, tc);
}

namespace {

template <typename LabelA, typename LabelB>
double AgreementImpl(const Dataset& eval, LabelA a, LabelB b) {
  if (eval.empty()) Fail(ErrorCode::kValidation, "empty evaluation set");
  size_t same = 0;
  for (const Document& doc : eval.documents) {
    same += a(doc.text) == b(doc.text) ? 1 : 0;
  }
  return static_cast<double>(same) / static_cast<double>(eval.size());
}

void CheckK(int a, int b) {
  if (a != b) {
    Fail(ErrorCode::kValidation, "class-count mismatch: " + std::to_string(a) +
                                     " vs " + std::to_string(b));
  }
}

}  // namespace

double Agreement(const Model& a, const Model& b, const Dataset& eval) {
  CheckK(a.num_classes(), b.num_classes());
  return AgreementImpl(
      eval, [&](const std::string& t) { return a.Predict(t).Argmax(); },
      [&](const std::string& t) { return b.Predict(t).Argmax(); });
}

double Agreement(const Model& a, const VictimService& victim,
                 const Dataset& eval) {
  CheckK(a.num_classes(), victim.measurement_model().num_classes());
  return AgreementImpl(
      eval, [&](const std::string& t) { return a.Predict(t).Argmax(); },
      [&](const std::string& t) {
        return victim.MeasurementPredict(t).Argmax();
      });
}

double Accuracy(const Model& m, const Dataset& eval) {
  CheckK(m.num_classes(), eval.num_classes);
  if (eval.empty()) Fail(ErrorCode::kValidation, "empty evaluation set");
  size_t correct = 0;
  for (const Document& doc : eval.documents) {
    correct += m.Predict(doc.text).Argmax() == doc.label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(eval.size());
}

}  // namespace mealab
