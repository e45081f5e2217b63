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

#include "victim/ledger.h"

#include <algorithm>

namespace mealab {

void BudgetLedger::Register(const std::string& client_id, uint64_t allowed) {
  std::lock_guard<std::mutex> lock(mu_);
  Account& acct = accounts_[client_id];
  acct.allowed = std::max({acct.allowed, allowed, acct.used});
}

void BudgetLedger::SetOpenAllowance(std::optional<uint64_t> allowed) {
  std::lock_guard<std::mutex> lock(mu_);
  open_allowance_ = allowed;
}

BudgetLedger::Consumption BudgetLedger::TryConsume(const std::string& client_id,
                                                   uint64_t n) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = accounts_.find(client_id);
  if (it == accounts_.end()) {
    if (!open_allowance_) return {Outcome::kUnknownClient, 0, 0};
    it = accounts_.emplace(client_id, Account{0, *open_allowance_}).first;
  }
  Account& acct = it->second;
  const uint64_t remaining = acct.allowed - acct.used;
  if (n > remaining) return {Outcome::kExceeded, acct.used, remaining};
  const uint64_t first = acct.used;
  acct.used += n;
  return {Outcome::kOk, first, acct.allowed - acct.used};
}

std::optional<BudgetLedger::Account> BudgetLedger::Lookup(
    const std::string& client_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = accounts_.find(client_id);
  if (it == accounts_.end()) return std::nullopt;
  return it->second;
}

}  // namespace mealab
