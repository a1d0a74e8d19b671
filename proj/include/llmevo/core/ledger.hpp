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

#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "llmevo/objective/adapter.hpp"

namespace llmevo {

enum class Admission {
  /// Key already evaluated or already reserved; serve from cache.
  cached,
  /// Novel key; a budget unit is reserved until commit() or release().
  admitted,
  /// Novel key but no budget left.
  exhausted,
};

/// Oracle-call accounting with a deduplication cache. consumed() only grows,
/// never exceeds the budget, and grows by one per committed novel key.
/// Thread-safe.
class BudgetLedger {
 public:
  explicit BudgetLedger(std::size_t budget) : budget_(budget) {}

  Admission admit(const std::string& key);
  /// Charges one unit for an admitted key and caches its result.
  void commit(const std::string& key, EvaluationResult result);
  /// Drops a reservation without charging (the oracle produced nothing).
  void release(const std::string& key);

  std::optional<EvaluationResult> lookup(const std::string& key) const;

  std::size_t budget() const noexcept { return budget_; }
  std::size_t consumed() const;
  std::size_t remaining() const;
  bool exhausted() const;

 private:
  std::size_t budget_;
  std::size_t consumed_ = 0;
  std::unordered_map<std::string, EvaluationResult> cache_;
  std::unordered_set<std::string> pending_;
  mutable std::mutex mutex_;
};

}  // namespace llmevo
