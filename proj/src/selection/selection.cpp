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

#include "llmevo/selection/selection.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace llmevo {

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(
        fmt::format("dominates: dimension mismatch ({} vs {})", a.size(), b.size()));
  }
  return kernels::dominates(a, b);
}

std::vector<std::vector<std::size_t>> nondominated_fronts(
    const std::vector<std::vector<double>>& points, kernels::Execution exec) {
  if (points.empty()) return {};
  return kernels::nondominated_sort(kernels::PointMatrix::from_rows(points), exec);
}

std::string_view to_string(SelectorMode m) noexcept {
  switch (m) {
    case SelectorMode::hybrid: return "hybrid";
    case SelectorMode::fitness_only: return "fitness_only";
    case SelectorMode::pareto_only: return "pareto_only";
  }
  return "hybrid";
}

std::optional<SelectorMode> parse_selector(std::string_view s) noexcept {
  if (s == "hybrid") return SelectorMode::hybrid;
  if (s == "fitness_only") return SelectorMode::fitness_only;
  if (s == "pareto_only") return SelectorMode::pareto_only;
  return std::nullopt;
}

namespace {

std::vector<std::size_t> fitness_order(std::span<const SelectionEntry> pool) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pool[a].fitness != pool[b].fitness) return pool[a].fitness > pool[b].fitness;
    return pool[a].id < pool[b].id;
  });
  return order;
}

// Takes up to `want` members from successive fronts, skipping `taken`.
std::vector<std::size_t> fill_from_fronts(const std::vector<std::vector<std::size_t>>& fronts,
                                          std::vector<bool>& taken, std::size_t want, Rng& rng) {
  std::vector<std::size_t> out;
  for (const auto& front : fronts) {
    if (out.size() >= want) break;
    std::vector<std::size_t> eligible;
    for (std::size_t i : front) {
      if (!taken[i]) eligible.push_back(i);
    }
    const std::size_t room = want - out.size();
    if (eligible.size() > room) {
      // Partial Fisher-Yates picks `room` positions uniformly; keep them in
      // front order afterwards.
      std::vector<std::size_t> pos(eligible.size());
      std::iota(pos.begin(), pos.end(), std::size_t{0});
      for (std::size_t k = 0; k < room; ++k) {
        const auto r = k + static_cast<std::size_t>(rng.below(pos.size() - k));
        std::swap(pos[k], pos[r]);
      }
      pos.resize(room);
      std::sort(pos.begin(), pos.end());
      std::vector<std::size_t> picked;
      picked.reserve(room);
      for (std::size_t p : pos) picked.push_back(eligible[p]);
      eligible = std::move(picked);
    }
    for (std::size_t i : eligible) {
      taken[i] = true;
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

SelectionResult select_survivors(std::span<const SelectionEntry> pool, std::size_t n,
                                 SelectorMode mode, Rng& rng) {
  SelectionResult result;
  if (pool.empty() || n == 0) return result;

  std::vector<std::vector<double>> points;
  points.reserve(pool.size());
  for (const auto& e : pool) points.emplace_back(e.normalized.begin(), e.normalized.end());
  const auto matrix = kernels::PointMatrix::from_rows(points);
  const auto fronts = kernels::nondominated_sort(matrix);
  const auto dominated_by = kernels::domination_counts_parallel(matrix);
  result.records.resize(pool.size());
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    for (std::size_t i : fronts[f]) {
      result.records[i] = DominanceRecord{pool[i].id, f, dominated_by[i]};
    }
  }

  const std::size_t target = std::min(n, pool.size());
  std::size_t fitness_slots = 0;
  switch (mode) {
    case SelectorMode::hybrid: fitness_slots = (target + 1) / 2; break;
    case SelectorMode::fitness_only: fitness_slots = target; break;
    case SelectorMode::pareto_only: fitness_slots = 0; break;
  }

  std::vector<bool> taken(pool.size(), false);
  const auto order = fitness_order(pool);
  for (std::size_t k = 0; k < fitness_slots; ++k) {
    taken[order[k]] = true;
    result.chosen.push_back(order[k]);
  }
  result.by_fitness = fitness_slots;

  const auto pareto = fill_from_fronts(fronts, taken, target - fitness_slots, rng);
  result.by_pareto = pareto.size();
  result.chosen.insert(result.chosen.end(), pareto.begin(), pareto.end());
  return result;
}

}  // namespace llmevo
