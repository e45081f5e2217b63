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

#include "victim/service.h"

#include <vector>

#include "common/error.h"
#include "common/random.h"
#include "common/text.h"
#include "json.hpp"

namespace mealab {

using nlohmann::json;

VictimService::VictimService(std::shared_ptr<const Model> model,
                             DefenseConfig defense)
    : model_(std::move(model)), defense_(defense) {
  if (!model_) Fail(ErrorCode::kInvalidArgument, "service needs a model");
  defense_.Validate();
}

namespace {

WireReply ProtocolError(const std::string& detail) {
  json j = {{"error", "protocol_error"}, {"detail", detail}};
  return {kStatusProtocolError, j.dump()};
}

}  // namespace

WireReply VictimService::Handle(std::string_view request_body) {
  json req;
  try {
    req = json::parse(request_body);
  } catch (const json::parse_error&) {
    return ProtocolError("request is not valid JSON");
  }
  if (!req.is_object()) return ProtocolError("request is not an object");
  if (!req.contains("client_id") || !req["client_id"].is_string()) {
    return ProtocolError("missing string field 'client_id'");
  }
  if (!req.contains("texts") || !req["texts"].is_array()) {
    return ProtocolError("missing array field 'texts'");
  }
  const std::string client_id = req["client_id"].get<std::string>();
  std::vector<std::string> texts;
  for (const json& t : req["texts"]) {
    if (!t.is_string()) return ProtocolError("'texts' must hold strings");
    texts.push_back(t.get<std::string>());
  }

  const auto grant = ledger_.TryConsume(client_id, texts.size());
  switch (grant.outcome) {
    case BudgetLedger::Outcome::kUnknownClient:
      return {kStatusUnknownClient, json({{"error", "unknown_client"}}).dump()};
    case BudgetLedger::Outcome::kExceeded:
      return {kStatusBudgetExceeded,
              json({{"error", "budget_exceeded"},
                    {"queries_remaining", grant.remaining}})
                  .dump()};
    case BudgetLedger::Outcome::kOk:
      break;
  }

  // Noise is keyed per client so concurrent clients cannot perturb each
  // other's streams.
  DefenseConfig keyed = defense_;
  keyed.noise_seed = DeriveSeed(defense_.noise_seed, HashString(client_id, 0));
  json results = json::array();
  for (size_t i = 0; i < texts.size(); ++i) {
    const auto logits = model_->Logits(texts[i]);
    const DefendedOutput out =
        ApplyDefense(logits, keyed, grant.first_ordinal + i);
    if (out.posterior) {
      results.push_back({{"probs", out.posterior->probs}});
    } else {
      results.push_back({{"label", *out.hard_label}});
    }
  }
  json reply = {{"results", std::move(results)},
                {"queries_remaining", grant.remaining}};
  return {kStatusOk, reply.dump()};
}

Posterior VictimService::MeasurementPredict(std::string_view text) const {
  return model_->Predict(text);
}

}  // namespace mealab
