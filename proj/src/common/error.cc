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

#include "common/error.h"

namespace mealab {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kValidation:
      return "validation_error";
    case ErrorCode::kConfig:
      return "config_error";
    case ErrorCode::kIo:
      return "io_error";
    case ErrorCode::kBudgetExceeded:
      return "budget_exceeded";
    case ErrorCode::kProtocol:
      return "protocol_error";
    case ErrorCode::kAttack:
      return "attack_error";
    case ErrorCode::kDegenerateData:
      return "degenerate_data";
    case ErrorCode::kUndefinedMetric:
      return "undefined_metric";
    case ErrorCode::kTransport:
      return "transport_error";
    case ErrorCode::kInternal:
      return "internal_error";
  }
  return "unknown_error";
}

}  // namespace mealab
