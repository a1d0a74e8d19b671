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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llmevo/kernels/kernels.hpp"

namespace llmevo::metrics {

struct KeyedFitness {
  std::string_view key;
  double fitness = 0.0;
};

/// Mean fitness of the k best distinct keys (fewer when history is smaller).
/// Empty history yields nullopt.
std::optional<double> top_k_mean(std::span<const KeyedFitness> history, std::size_t k);

/// Budget-normalized area under the running top-k mean: at each oracle call i
/// the mean of the best min(k, i) values so far; the last value is carried to
/// `budget`; the result is the mean over all budget positions. Throws
/// std::invalid_argument when trace is longer than budget.
double auc_top_k(std::span<const double> trace, std::size_t k, std::size_t budget);

/// Exact Lebesgue measure of the union of boxes [p, reference] over
/// minimization points. Recursive slicing on the last coordinate; cost grows
/// as n^(M-1) so it is used up to M = 4.
double hypervolume_exact(const kernels::PointMatrix& minimization_points,
                         std::span<const double> reference);

struct HypervolumeOptions {
  double reference = 1.1;
  std::size_t exact_max_dims = 4;
  /// Monte-Carlo sample count above exact_max_dims.
  std::uint64_t mc_samples = 200'000;
  std::uint64_t mc_seed = 0x5eed;
};

/// Hypervolume of normalized maximization vectors: each is mapped to
/// d = 1 - f and measured against (reference, ..., reference).
double hypervolume(const std::vector<std::vector<double>>& normalized,
                   const HypervolumeOptions& options = {});

struct Proposal {
  std::string key;  // canonical key, or the raw text for undecodable proposals
  bool decodable = false;
};

struct PopulationStats {
  std::optional<double> uniqueness;
  std::optional<double> validity;
  std::optional<double> diversity;
};

/// validity = decodable / all proposals; uniqueness = distinct keys / all
/// proposals; diversity = mean pairwise distance over the given top set
/// (callers pass at most 100 items ranked by fitness).
PopulationStats population_stats(std::span<const Proposal> proposals, std::size_t top_count,
                                 const kernels::PairDistance& distance,
                                 kernels::Execution exec = kernels::Execution::parallel);

struct MetricSnapshot {
  std::size_t generation = 0;
  std::size_t consumed = 0;
  std::optional<double> top1_f;
  std::optional<double> top10_f;
  double auc_top10 = 0.0;
  double hypervolume = 0.0;
  std::optional<double> uniqueness;
  std::optional<double> validity;
  std::optional<double> diversity;
};

/// Header line of metrics.csv.
std::string_view csv_header();
std::string to_csv_row(const MetricSnapshot& s);
/// Parses one data row; nullopt on malformed input.
std::optional<MetricSnapshot> parse_csv_row(std::string_view line);

}  // namespace llmevo::metrics
