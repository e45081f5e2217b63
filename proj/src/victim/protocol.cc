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

#include "victim/protocol.h"

#include "json.hpp"

namespace mealab {

using nlohmann::json;

std::string EncodeRequest(const std::string& client_id,
                          std::span<const std::string> texts) {
  json j = {{"client_id", client_id},
            {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  return j.dump();
}

QueryResult DecodeReply(const WireReply& reply) {
  QueryResult result;
  json j;
  try {
    j = json::parse(reply.body);
  } catch (const json::parse_error& e) {
    result.status = QueryStatus::kTransportError;
    result.error = std::string("unparseable reply: ") + e.what();
    return result;
  }
  auto remaining = [&] {
    if (j.contains("queries_remaining") &&
        j["queries_remaining"].is_number_unsigned()) {
      result.queries_remaining = j["queries_remaining"].get<uint64_t>();
    }
  };
  switch (reply.status) {
    case kStatusOk:
      break;
    case kStatusBudgetExceeded:
      result.status = QueryStatus::kBudgetExceeded;
      result.error = "budget_exceeded";
      remaining();
      return result;
    case kStatusUnknownClient:
      result.status = QueryStatus::kUnknownClient;
      result.error = "unknown_client";
      return result;
    case kStatusProtocolError:
      result.status = QueryStatus::kProtocolError;
      result.error = j.value("detail", std::string("protocol_error"));
      return result;
    default:
      result.status = QueryStatus::kTransportError;
      result.error = "unexpected status " + std::to_string(reply.status);
      return result;
  }
  try {
    remaining();
    for (const json& r : j.at("results")) {
      PredictionResponse resp;
      resp.queries_remaining = result.queries_remaining;
      if (r.contains("probs")) {
        resp.posterior = Posterior{r["probs"].get<std::vector<double>>()};
      } else {
        resp.hard_label = r.at("label").get<int>();
      }
      result.responses.push_back(std::move(resp));
    }
  } catch (const json::exception& e) {
    result.status = QueryStatus::kTransportError;
    result.responses.clear();
    result.error = std::string("malformed reply: ") + e.what();
  }
  return result;
}

}  // namespace mealab
