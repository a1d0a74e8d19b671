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

// Data-parallel inner loops. Every kernel has a serial reference (kept for
// testing and benchmarking) and an OpenMP version; both produce bit-identical
// results for any thread count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace llmevo::kernels {

/// Dense row-major matrix of objective vectors (one row per point).
class PointMatrix {
 public:
  PointMatrix() = default;
  PointMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  PointMatrix(std::size_t cols, std::vector<double> data);

  static PointMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  void push_row(std::span<const double> values);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Execution { serial, parallel };

/// Maximization-convention strict dominance on equal-length spans.
bool dominates(std::span<const double> a, std::span<const double> b) noexcept;

/// For every point, how many points in the set dominate it.
std::vector<std::uint32_t> domination_counts_serial(const PointMatrix& points);
std::vector<std::uint32_t> domination_counts_parallel(const PointMatrix& points);

/// Fast non-dominated sort. Fronts list point indices in ascending order.
std::vector<std::vector<std::size_t>> nondominated_sort(const PointMatrix& points,
                                                        Execution exec = Execution::parallel);

struct MonteCarloOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
  /// Samples per independently seeded chunk; fixes the result regardless of
  /// thread count.
  std::uint64_t chunk = 4096;
};

/// Monte-Carlo volume of the union of boxes [p, reference] for minimization
/// points p (reference given per dimension).
double hypervolume_mc_serial(const PointMatrix& minimization_points,
                             std::span<const double> reference, const MonteCarloOptions& options);
double hypervolume_mc_parallel(const PointMatrix& minimization_points,
                               std::span<const double> reference, const MonteCarloOptions& options);

using PairDistance = std::function<double(std::size_t, std::size_t)>;

/// Mean of distance(i, j) over all unordered pairs i < j of n items. The
/// distance callback must be safe to call concurrently.
double mean_pairwise_distance_serial(std::size_t n, const PairDistance& distance);
double mean_pairwise_distance_parallel(std::size_t n, const PairDistance& distance);

/// Applies fn(i) for i in [0, n) across OpenMP threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

int max_threads() noexcept;

}  // namespace llmevo::kernels
