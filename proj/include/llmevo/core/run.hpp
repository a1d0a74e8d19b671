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
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "llmevo/core/config.hpp"
#include "llmevo/core/engine.hpp"
#include "llmevo/llm/backend.hpp"
#include "llmevo/problems/problem.hpp"

namespace llmevo {

std::unique_ptr<Problem> make_problem(const RunConfig& config);

/// The mock backend is seeded from the run seed's mock stream so replies are
/// a pure function of (run seed, prompt).
std::unique_ptr<llm::Backend> make_backend(const RunConfig& config, const Problem& problem);

/// Reads engine.seeds_file (a JSON array of strings, or text with one
/// candidate per line, or blocks separated by "---" lines), or draws
/// effective_initial_size() seeds from the problem with the seeds stream.
std::vector<std::string> load_seeds(const RunConfig& config, const Problem& problem);

struct RunOptions {
  std::function<void(const GenerationReport&)> progress;
  /// Stop after this many consecutive generations without any new oracle
  /// call (every proposal a duplicate or undecodable). 0 disables the guard.
  std::size_t stall_generations = 200;
};

struct RunOutcome {
  std::filesystem::path directory;
  StopDecision stop;
  std::size_t generations = 0;
  metrics::MetricSnapshot final_snapshot;
  CostSummary cost;
  bool failed = false;
  std::string error;
};

/// Runs to completion and writes the run directory: config.snapshot.toml,
/// events.jsonl, metrics.csv, experience.history.jsonl, population.final.json
/// and, last, manifest.json (atomically). A run that dies part-way leaves its
/// files plus a FAILED marker. Configuration errors are rethrown after the
/// marker is written; other errors are reported through the outcome.
RunOutcome execute_run(const RunConfig& config, const std::filesystem::path& run_dir,
                       const RunOptions& options = {}, std::unique_ptr<Problem> problem = nullptr,
                       std::unique_ptr<llm::Backend> backend = nullptr);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace llmevo
