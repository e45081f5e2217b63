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

#ifndef MEALAB_VICTIM_SERVICE_H_
#define MEALAB_VICTIM_SERVICE_H_

#include <memory>
#include <string>
#include <string_view>

#include "modeling/model.h"
#include "victim/defense.h"
#include "victim/ledger.h"
#include "victim/protocol.h"

namespace mealab {

// The black-box prediction API. Every transport funnels request bodies
// through Handle(), so the payload bytes do not depend on the transport.
// Thread-safe.
class VictimService {
 public:
  VictimService(std::shared_ptr<const Model> model, DefenseConfig defense);

  BudgetLedger& ledger() { return ledger_; }
  const DefenseConfig& defense() const { return defense_; }

  WireReply Handle(std::string_view request_body);

  // Experimenter's measurement channel: undefended posterior, no budget
  // charge. Attack code never receives this.
  Posterior MeasurementPredict(std::string_view text) const;
  const Model& measurement_model() const { return *model_; }

 private:
  std::shared_ptr<const Model> model_;
  DefenseConfig defense_;
  BudgetLedger ledger_;
};

}  // namespace mealab

#endif  // MEALAB_VICTIM_SERVICE_H_
