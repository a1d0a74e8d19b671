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
#include <span>
#include <string_view>
#include <vector>

#include "llmevo/core/rng.hpp"
#include "llmevo/kernels/kernels.hpp"

namespace llmevo {

using CandidateId = std::uint64_t;

/// Strict Pareto dominance, maximization convention. Throws
/// std::invalid_argument when the vectors differ in length.
bool dominates(std::span<const double> a, std::span<const double> b);

struct DominanceRecord {
  CandidateId id = 0;
  std::size_t front_index = 0;
  std::size_t dominated_by_count = 0;
};

/// Partition of `points` (rows, maximization) into successive non-dominated
/// fronts. Indices within a front keep input order.
std::vector<std::vector<std::size_t>> nondominated_fronts(
    const std::vector<std::vector<double>>& points,
    kernels::Execution exec = kernels::Execution::parallel);

enum class SelectorMode { hybrid, fitness_only, pareto_only };

std::string_view to_string(SelectorMode m) noexcept;
std::optional<SelectorMode> parse_selector(std::string_view s) noexcept;

/// What selection needs to know about a pool member.
struct SelectionEntry {
  CandidateId id = 0;
  double fitness = 0.0;
  std::span<const double> normalized;
};

struct SelectionResult {
  /// Indices into the pool: fitness picks first (rank order), then Pareto
  /// picks (front order).
  std::vector<std::size_t> chosen;
  std::size_t by_fitness = 0;
  std::size_t by_pareto = 0;
  std::vector<DominanceRecord> records;
};

/// Survivor selection. hybrid takes ceil(n/2) by descending fitness (ties to
/// the smaller id) and fills the remaining floor(n/2) from fronts F0, F1, ...
/// skipping already-picked members; the front that overflows is subsampled
/// uniformly with `rng`. fitness_only and pareto_only use one rule for all n
/// slots. Pool entries must have unique ids.
SelectionResult select_survivors(std::span<const SelectionEntry> pool, std::size_t n,
                                 SelectorMode mode, Rng& rng);

}  // namespace llmevo
