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
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "llmevo/core/candidate.hpp"
#include "llmevo/core/config.hpp"
#include "llmevo/core/events.hpp"
#include "llmevo/core/ledger.hpp"
#include "llmevo/core/rng.hpp"
#include "llmevo/experience/experience.hpp"
#include "llmevo/llm/backend.hpp"
#include "llmevo/metrics/metrics.hpp"
#include "llmevo/objective/adapter.hpp"
#include "llmevo/problems/problem.hpp"

namespace llmevo {

struct CostSummary {
  std::size_t optimizer_calls = 0;
  std::size_t summarizer_calls = 0;
  std::size_t failed_calls = 0;
  std::uint64_t input_tokens = 0;
  std::uint64_t output_tokens = 0;
  double price_usd = 0.0;
};

struct GenerationCounts {
  std::size_t jobs = 0;
  std::size_t failed_calls = 0;
  std::size_t proposed = 0;
  std::size_t decodable = 0;
  std::size_t duplicates = 0;
  std::size_t novel = 0;
  std::size_t valid = 0;
  std::size_t over_budget = 0;
  std::size_t evaluator_failures = 0;
  std::size_t consumed = 0;
};

struct RunState {
  explicit RunState(const RunConfig& config);

  std::size_t generation = 0;
  /// Current population: evaluated, valid, distinct ids.
  std::vector<Candidate> population;
  BudgetLedger ledger;
  Experience experience;
  RngStreams streams;
  FeedbackAdapter adapter;
  /// Every evaluated valid candidate with a distinct key, in evaluation order.
  std::vector<Candidate> archive;
  /// Fitness per oracle call (0 for results the oracle marked invalid).
  std::vector<double> call_trace;
  std::vector<metrics::Proposal> proposals;
  std::vector<metrics::MetricSnapshot> snapshots;
  CostSummary cost;
  CandidateId next_id = 1;
};

struct GenerationReport {
  std::size_t generation = 0;
  std::vector<VariationJob> jobs;
  GenerationCounts counts;
  metrics::MetricSnapshot snapshot;
  std::size_t memo_version = 0;
  bool experience_skipped = false;
  std::string warning;
};

struct StopDecision {
  bool stop = false;
  /// "budget" or "generation_cap" when stopping.
  std::string reason;
};

/// The generation loop. The engine is the single writer of RunState; backend
/// calls and oracle evaluations fan out inside a generation and are merged
/// in job order.
class Engine {
 public:
  Engine(RunConfig config, const Problem& problem, llm::Backend& backend, EventLog& log);

  /// Evaluates the seeds (with dedup) and selects P_0. Throws ConfigError when
  /// no seed decodes or the budget cannot cover the distinct decodable seeds,
  /// FatalError when no seed evaluates valid.
  std::unique_ptr<RunState> initialize_run(const std::vector<std::string>& seeds);

  /// Draws calls_per_generation jobs with the pairing stream.
  std::vector<VariationJob> pair_parents(RunState& state) const;

  GenerationReport run_generation(RunState& state);

  StopDecision should_stop(const RunState& state) const;

  const RunConfig& config() const noexcept { return config_; }

 private:
  struct Proposed {
    std::string text;
    std::vector<CandidateId> parents;
    std::optional<std::size_t> job;
  };

  /// Decodes, dedups, charges and evaluates; returns the novel valid ones.
  std::vector<Candidate> evaluate_proposals(RunState& state, std::vector<Proposed> proposed,
                                            std::size_t generation, GenerationCounts& counts);
  metrics::MetricSnapshot snapshot(const RunState& state) const;
  void account(RunState& state, const llm::BackendReply& reply, const llm::BackendRequest& request,
               bool summarizer);
  void renormalize(RunState& state) const;

  RunConfig config_;
  const Problem& problem_;
  llm::Backend& backend_;
  EventLog& log_;
  std::vector<ObjectiveSpec> specs_;
};

/// Builds the feedback adapter for a problem, applying weight overrides by
/// objective name. Throws ConfigError for unknown names.
FeedbackAdapter make_adapter(const Problem& problem,
                             const std::vector<std::pair<std::string, double>>& weights);

}  // namespace llmevo
