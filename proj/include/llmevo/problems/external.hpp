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

#include <memory>
#include <string>
#include <vector>

#include "llmevo/bridge/worker.hpp"
#include "llmevo/problems/problem.hpp"

namespace llmevo {

struct ExternalProblemOptions {
  std::string name = "external";
  std::vector<std::string> command;
  std::size_t workers = 1;
  bridge::WorkerOptions worker;
  llm::TaskTemplate task;
  /// Overrides for the handshake's declared objective weights, by name.
  std::vector<std::pair<std::string, double>> weights;
  /// Promote these declared constraints to objectives.
  std::vector<std::string> promote;
};

/// A problem whose oracle lives in worker processes. Candidates are the
/// trimmed text; a batch becomes one request per worker slice. Throws
/// FatalError when no worker completes the handshake.
std::unique_ptr<Problem> make_external(ExternalProblemOptions options);

}  // namespace llmevo
