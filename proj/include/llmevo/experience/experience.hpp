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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llmevo/core/candidate.hpp"
#include "llmevo/core/rng.hpp"
#include "llmevo/llm/backend.hpp"

namespace llmevo {

/// The single evolving memo. Version 0 with an empty memo means "nothing
/// learned yet".
struct Experience {
  std::string memo;
  std::size_t version = 0;
  std::vector<CandidateId> provenance;
};

struct EvidenceItem {
  CandidateId id = 0;
  std::string text;
  std::vector<double> raw;
  std::vector<double> normalized;
  double fitness = 0.0;
};

struct EvidenceSet {
  /// Highest fitness first.
  std::vector<EvidenceItem> good;
  std::vector<EvidenceItem> bad;
  std::string rendered;

  std::vector<CandidateId> ids() const;
};

struct EvidenceOptions {
  std::size_t good_count = 10;
  std::size_t bad_count = 10;
};

/// Picks the top good_count distinct candidates by fitness and a uniform
/// sample (without replacement) of bad_count from the lower half of the
/// ranking. When history is smaller than good_count + bad_count both shrink
/// in proportion; the two sets never overlap. `history` must hold evaluated
/// valid candidates with distinct canonical keys.
EvidenceSet build_evidence(std::span<const Candidate* const> history,
                           std::span<const ObjectiveSpec> specs, const EvidenceOptions& options,
                           Rng& rng);

std::string_view summarizer_preamble();

/// Prompt sent to the summarizer: prior memo plus rendered evidence.
llm::BackendRequest summarizer_request(const Experience& prior, const EvidenceSet& evidence,
                                       std::size_t word_cap);

/// Keeps the first `word_cap` whitespace-separated words, preserving the
/// original spacing between them.
std::string truncate_words(std::string_view text, std::size_t word_cap);
std::size_t word_count(std::string_view text);

struct UpdateOutcome {
  Experience experience;
  bool skipped = false;
  std::string error;
  std::optional<llm::BackendReply> reply;
  llm::BackendRequest request;
};

/// One summarizer call. On backend failure the prior memo is kept and the
/// outcome is marked skipped.
UpdateOutcome update_experience(const Experience& prior, const EvidenceSet& evidence,
                                llm::Backend& backend, std::size_t word_cap);

/// Bernoulli(p_exp) draw, one per backend call. Always consumes one draw so
/// the injection stream position depends only on the call count.
std::optional<std::string> maybe_inject(const Experience& experience, double p_exp, Rng& rng);

}  // namespace llmevo
