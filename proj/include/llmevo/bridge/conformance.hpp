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

#include <string>
#include <vector>

#include "llmevo/bridge/worker.hpp"

namespace llmevo::bridge {

struct ConformanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConformanceReport {
  std::vector<ConformanceCheck> checks;
  /// Named violations: "protocol", "non-finite objective", "missing
  /// objective", "determinism", "invalid rejected", "worker unavailable".
  std::vector<std::string> violations;

  bool passed() const noexcept { return violations.empty(); }
};

struct ConformanceOptions {
  /// A string the worker should accept.
  std::string valid_probe = "c1ccccc1";
  /// A string the worker should reject.
  std::string invalid_probe = "not_a_molecule((";
  std::size_t large_batch = 256;
};

/// Fixed vectors: empty batch, duplicates, an undecodable candidate, a large
/// batch, and a repeat of the same candidate. Any violation quarantines the
/// worker.
ConformanceReport conformance_suite(ExternalWorker& worker, const ConformanceOptions& options = {});

}  // namespace llmevo::bridge
