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

#ifndef MEALAB_VICTIM_PROTOCOL_H_
#define MEALAB_VICTIM_PROTOCOL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modeling/model.h"

namespace mealab {

// Wire protocol (JSON over POST /v1/predict):
//   request   {"client_id": str, "texts": [str]}
//   200       {"results": [{"probs": [float]} | {"label": int}],
//              "queries_remaining": int}
//   429       {"error": "budget_exceeded", "queries_remaining": int}
//   403       {"error": "unknown_client"}
//   400       {"error": "protocol_error", "detail": str}
inline constexpr char kPredictPath[] = "/v1/predict";
inline constexpr int kStatusOk = 200;
inline constexpr int kStatusProtocolError = 400;
inline constexpr int kStatusUnknownClient = 403;
inline constexpr int kStatusBudgetExceeded = 429;

struct WireReply {
  int status = 0;
  std::string body;

  bool operator==(const WireReply&) const = default;
};

// Exactly one of posterior / hard_label is set.
struct PredictionResponse {
  std::optional<Posterior> posterior;
  std::optional<int> hard_label;
  uint64_t queries_remaining = 0;
};

enum class QueryStatus {
  kOk,
  kBudgetExceeded,
  kUnknownClient,
  kProtocolError,
  kTransportError,
};

struct QueryResult {
  QueryStatus status = QueryStatus::kOk;
  std::vector<PredictionResponse> responses;  // empty unless kOk
  uint64_t queries_remaining = 0;
  std::string error;
};

std::string EncodeRequest(const std::string& client_id,
                          std::span<const std::string> texts);
QueryResult DecodeReply(const WireReply& reply);

}  // namespace mealab

#endif  // MEALAB_VICTIM_PROTOCOL_H_
