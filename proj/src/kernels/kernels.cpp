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

#include "llmevo/kernels/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

#include "llmevo/core/rng.hpp"

namespace llmevo::kernels {

PointMatrix::PointMatrix(std::size_t cols, std::vector<double> data)
    : cols_(cols), data_(std::move(data)) {
  if (cols_ == 0) {
    if (!data_.empty()) throw std::invalid_argument("PointMatrix: data without columns");
    rows_ = 0;
    return;
  }
  if (data_.size() % cols_ != 0) throw std::invalid_argument("PointMatrix: ragged data");
  rows_ = data_.size() / cols_;
}

PointMatrix PointMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  PointMatrix m;
  for (const auto& r : rows) m.push_row(r);
  return m;
}

void PointMatrix::push_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("PointMatrix: row width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

bool dominates(std::span<const double> a, std::span<const double> b) noexcept {
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly = true;
  }
  return strictly;
}

namespace {

std::uint32_t count_dominators(const PointMatrix& points, std::size_t i) {
  std::uint32_t count = 0;
  const auto target = points.row(i);
  for (std::size_t j = 0; j < points.rows(); ++j) {
    if (j != i && dominates(points.row(j), target)) ++count;
  }
  return count;
}

// Counts how many points fall in the dominated region of a chunk of samples.
std::uint64_t mc_chunk(const PointMatrix& pts, std::span<const double> lower,
                       std::span<const double> reference, std::uint64_t seed,
                       std::uint64_t chunk_index, std::uint64_t count) {
  Rng rng(derive_seed(seed, chunk_index));
  const std::size_t m = reference.size();
  std::vector<double> u(m);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < count; ++s) {
    for (std::size_t d = 0; d < m; ++d) u[d] = rng.uniform(lower[d], reference[d]);
    for (std::size_t p = 0; p < pts.rows(); ++p) {
      const auto row = pts.row(p);
      bool inside = true;
      for (std::size_t d = 0; d < m; ++d) {
        if (row[d] > u[d]) {
          inside = false;
          break;
        }
      }
      if (inside) {
        ++hits;
        break;
      }
    }
  }
  return hits;
}

struct McSetup {
  std::vector<double> lower;
  double box_volume = 0.0;
  std::uint64_t chunks = 0;
};

McSetup mc_setup(const PointMatrix& pts, std::span<const double> reference,
                 const MonteCarloOptions& options) {
  if (pts.rows() > 0 && pts.cols() != reference.size()) {
    throw std::invalid_argument("hypervolume: reference dimension mismatch");
  }
  McSetup s;
  s.lower.assign(reference.begin(), reference.end());
  for (std::size_t p = 0; p < pts.rows(); ++p) {
    const auto row = pts.row(p);
    for (std::size_t d = 0; d < row.size(); ++d) s.lower[d] = std::min(s.lower[d], row[d]);
  }
  s.box_volume = 1.0;
  for (std::size_t d = 0; d < reference.size(); ++d) s.box_volume *= reference[d] - s.lower[d];
  const std::uint64_t chunk = std::max<std::uint64_t>(1, options.chunk);
  s.chunks = (options.samples + chunk - 1) / chunk;
  return s;
}

std::uint64_t chunk_size(const MonteCarloOptions& o, std::uint64_t c) {
  const std::uint64_t chunk = std::max<std::uint64_t>(1, o.chunk);
  return std::min(chunk, o.samples - c * chunk);
}

}  // namespace

std::vector<std::uint32_t> domination_counts_serial(const PointMatrix& points) {
  std::vector<std::uint32_t> counts(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) counts[i] = count_dominators(points, i);
  return counts;
}

std::vector<std::uint32_t> domination_counts_parallel(const PointMatrix& points) {
  std::vector<std::uint32_t> counts(points.rows());
  const auto n = static_cast<std::int64_t>(points.rows());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(i)] = count_dominators(points, static_cast<std::size_t>(i));
  }
  return counts;
}

std::vector<std::vector<std::size_t>> nondominated_sort(const PointMatrix& points, Execution exec) {
  const std::size_t n = points.rows();
  std::vector<std::vector<std::size_t>> fronts;
  if (n == 0) return fronts;

  auto remaining = exec == Execution::parallel ? domination_counts_parallel(points)
                                               : domination_counts_serial(points);
  // dominated[i]: points that i dominates.
  std::vector<std::vector<std::size_t>> dominated(n);
  const auto build_row = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && dominates(points.row(i), points.row(j))) dominated[i].push_back(j);
    }
  };
  if (exec == Execution::parallel) {
    const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < sn; ++i) build_row(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) build_row(i);
  }

  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    if (remaining[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated[i]) {
        if (--remaining[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

double hypervolume_mc_serial(const PointMatrix& pts, std::span<const double> reference,
                             const MonteCarloOptions& options) {
  if (pts.rows() == 0 || options.samples == 0) return 0.0;
  const auto setup = mc_setup(pts, reference, options);
  std::uint64_t hits = 0;
  for (std::uint64_t c = 0; c < setup.chunks; ++c) {
    hits += mc_chunk(pts, setup.lower, reference, options.seed, c, chunk_size(options, c));
  }
  return setup.box_volume * static_cast<double>(hits) / static_cast<double>(options.samples);
}

double hypervolume_mc_parallel(const PointMatrix& pts, std::span<const double> reference,
                               const MonteCarloOptions& options) {
  if (pts.rows() == 0 || options.samples == 0) return 0.0;
  const auto setup = mc_setup(pts, reference, options);
  std::uint64_t hits = 0;
  const auto chunks = static_cast<std::int64_t>(setup.chunks);
#pragma omp parallel for reduction(+ : hits) schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const auto uc = static_cast<std::uint64_t>(c);
    hits += mc_chunk(pts, setup.lower, reference, options.seed, uc, chunk_size(options, uc));
  }
  return setup.box_volume * static_cast<double>(hits) / static_cast<double>(options.samples);
}

double mean_pairwise_distance_serial(std::size_t n, const PairDistance& distance) {
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) row += distance(i, j);
    total += row;
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double mean_pairwise_distance_parallel(std::size_t n, const PairDistance& distance) {
  if (n < 2) return 0.0;
  // Per-row partial sums, reduced in row order so the result matches serial.
  std::vector<double> rows(n, 0.0);
  const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) row += distance(i, j);
    rows[i] = row;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const auto sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < sn; ++i) fn(static_cast<std::size_t>(i));
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace llmevo::kernels
