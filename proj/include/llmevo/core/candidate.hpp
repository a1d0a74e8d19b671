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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "llmevo/objective/adapter.hpp"
#include "llmevo/problems/circle_packing.hpp"
#include "llmevo/selection/selection.hpp"

namespace llmevo {

struct TokenString {
  std::string value;
  friend bool operator==(const TokenString&, const TokenString&) = default;
};

struct RawText {
  std::string value;
  friend bool operator==(const RawText&, const RawText&) = default;
};

using RealVector = std::vector<double>;

/// Decoded form of a candidate. Each built-in problem owns one alternative;
/// external workers get the trimmed text.
using Payload = std::variant<circles::Layout, RealVector, TokenString, RawText>;

enum class JobKind { mutation, crossover };

std::string_view to_string(JobKind k) noexcept;

struct Candidate {
  CandidateId id = 0;
  std::string text;
  std::optional<Payload> payload;
  std::optional<EvaluationResult> eval;
  std::size_t generation = 0;
  /// Empty for seeds, one for mutation, two for crossover.
  std::vector<CandidateId> parents;
  std::string canonical_key;

  bool evaluated_valid() const noexcept { return eval && eval->valid; }
  double fitness() const noexcept { return eval ? eval->fitness : 0.0; }
};

struct VariationJob {
  std::size_t index = 0;
  JobKind kind = JobKind::mutation;
  std::vector<CandidateId> parents;
  /// Crossover drawn on a single-member population.
  bool downgraded = false;
};

}  // namespace llmevo
