// Copyright 2026 The llmevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "llmevo/core/ledger.hpp"

#include <stdexcept>

namespace llmevo {

Admission BudgetLedger::admit(const std::string& key) {
  std::lock_guard lock(mutex_);
  if (cache_.contains(key) || pending_.contains(key)) return Admission::cached;
  if (consumed_ + pending_.size() >= budget_) return Admission::exhausted;
  pending_.insert(key);
  return Admission::admitted;
}

void BudgetLedger::commit(const std::string& key, EvaluationResult result) {
  std::lock_guard lock(mutex_);
  if (pending_.erase(key) == 0) throw std::logic_error("ledger: commit without admission");
  cache_.emplace(key, std::move(result));
  ++consumed_;
}

void BudgetLedger::release(const std::string& key) {
  std::lock_guard lock(mutex_);
  pending_.erase(key);
}

std::optional<EvaluationResult> BudgetLedger::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  return std::nullopt;
}

std::size_t BudgetLedger::consumed() const {
  std::lock_guard lock(mutex_);
  return consumed_;
}

std::size_t BudgetLedger::remaining() const {
  std::lock_guard lock(mutex_);
  return budget_ - consumed_;
}

bool BudgetLedger::exhausted() const {
  std::lock_guard lock(mutex_);
  return consumed_ >= budget_;
}

}  // namespace llmevo
