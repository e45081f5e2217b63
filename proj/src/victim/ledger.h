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

#ifndef MEALAB_VICTIM_LEDGER_H_
#define MEALAB_VICTIM_LEDGER_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace mealab {

// Per-client query budgets. TryConsume is an atomic check-and-decrement:
// a request for n queries either takes all n or nothing.
class BudgetLedger {
 public:
  enum class Outcome { kOk, kUnknownClient, kExceeded };

  struct Consumption {
    Outcome outcome = Outcome::kOk;
    // Ordinal of the client's first query in this grant (its prior usage).
    uint64_t first_ordinal = 0;
    uint64_t remaining = 0;
  };

  struct Account {
    uint64_t used = 0;
    uint64_t allowed = 0;
  };

  BudgetLedger() = default;
  BudgetLedger(const BudgetLedger&) = delete;
  BudgetLedger& operator=(const BudgetLedger&) = delete;

  // Registers or re-registers a client; usage is kept on re-registration and
  // the allowance may only grow.
  void Register(const std::string& client_id, uint64_t allowed);
  // Clients not registered explicitly get this allowance on first contact.
  void SetOpenAllowance(std::optional<uint64_t> allowed);

  Consumption TryConsume(const std::string& client_id, uint64_t n);
  std::optional<Account> Lookup(const std::string& client_id) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, Account> accounts_;
  std::optional<uint64_t> open_allowance_;
};

}  // namespace mealab

#endif  // MEALAB_VICTIM_LEDGER_H_
