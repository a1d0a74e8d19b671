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

#include "llmevo/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

namespace llmevo::metrics {

std::optional<double> top_k_mean(std::span<const KeyedFitness> history, std::size_t k) {
  if (history.empty() || k == 0) return std::nullopt;
  std::unordered_set<std::string_view> seen;
  std::vector<double> values;
  values.reserve(history.size());
  for (const auto& h : history) {
    if (seen.insert(h.key).second) values.push_back(h.fitness);
  }
  const std::size_t take = std::min(k, values.size());
  std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(take),
                    values.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += values[i];
  return sum / static_cast<double>(take);
}

double auc_top_k(std::span<const double> trace, std::size_t k, std::size_t budget) {
  if (trace.size() > budget) {
    throw std::invalid_argument(
        fmt::format("auc_top_k: trace of {} calls exceeds budget {}", trace.size(), budget));
  }
  if (trace.empty() || k == 0 || budget == 0) return 0.0;
  std::priority_queue<double, std::vector<double>, std::greater<>> best;  // min-heap of top k
  double sum_best = 0.0;
  double area = 0.0;
  double running = 0.0;
  for (double v : trace) {
    if (best.size() < k) {
      best.push(v);
      sum_best += v;
    } else if (v > best.top()) {
      sum_best += v - best.top();
      best.pop();
      best.push(v);
    }
    running = sum_best / static_cast<double>(best.size());
    area += running;
  }
  area += running * static_cast<double>(budget - trace.size());
  return area / static_cast<double>(budget);
}

namespace {

double hv_recursive(std::vector<std::vector<double>> pts, std::span<const double> ref) {
  const std::size_t m = ref.size();
  if (pts.empty()) return 0.0;
  if (m == 1) {
    double lo = ref[0];
    for (const auto& p : pts) lo = std::min(lo, p[0]);
    return ref[0] - lo;
  }
  if (m == 2) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
      return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    double area = 0.0;
    double y_best = ref[1];
    for (const auto& p : pts) {
      if (p[1] < y_best) {
        area += (ref[0] - p[0]) * (y_best - p[1]);
        y_best = p[1];
      }
    }
    return area;
  }
  // Slice along the last coordinate.
  std::sort(pts.begin(), pts.end(),
            [m](const auto& a, const auto& b) { return a[m - 1] < b[m - 1]; });
  const auto sub_ref = ref.first(m - 1);
  double volume = 0.0;
  std::vector<std::vector<double>> projected;
  projected.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    projected.emplace_back(pts[i].begin(), pts[i].begin() + static_cast<std::ptrdiff_t>(m - 1));
    const double next = i + 1 < pts.size() ? pts[i + 1][m - 1] : ref[m - 1];
    const double height = next - pts[i][m - 1];
    if (height > 0.0) volume += hv_recursive(projected, sub_ref) * height;
  }
  return volume;
}

}  // namespace

double hypervolume_exact(const kernels::PointMatrix& points, std::span<const double> reference) {
  if (points.rows() == 0) return 0.0;
  if (points.cols() != reference.size()) {
    throw std::invalid_argument("hypervolume: reference dimension mismatch");
  }
  std::vector<std::vector<double>> inside;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto row = points.row(i);
    bool ok = true;
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (!(row[d] < reference[d])) ok = false;
    }
    if (ok) inside.emplace_back(row.begin(), row.end());
  }
  return hv_recursive(std::move(inside), reference);
}

double hypervolume(const std::vector<std::vector<double>>& normalized,
                   const HypervolumeOptions& options) {
  if (normalized.empty()) return 0.0;
  const std::size_t m = normalized.front().size();
  kernels::PointMatrix minimization(0, 0);
  for (const auto& p : normalized) {
    if (p.size() != m) throw std::invalid_argument("hypervolume: ragged point set");
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(p[i])) throw std::invalid_argument("hypervolume: non-finite point");
      d[i] = 1.0 - p[i];
    }
    minimization.push_row(d);
  }
  const std::vector<double> ref(m, options.reference);
  if (m <= options.exact_max_dims) return hypervolume_exact(minimization, ref);
  kernels::MonteCarloOptions mc;
  mc.samples = options.mc_samples;
  mc.seed = options.mc_seed;
  return kernels::hypervolume_mc_parallel(minimization, ref, mc);
}

PopulationStats population_stats(std::span<const Proposal> proposals, std::size_t top_count,
                                 const kernels::PairDistance& distance, kernels::Execution exec) {
  PopulationStats out;
  if (proposals.empty()) return out;
  std::set<std::string_view> keys;
  std::size_t decodable = 0;
  for (const auto& p : proposals) {
    keys.insert(p.key);
    if (p.decodable) ++decodable;
  }
  const auto total = static_cast<double>(proposals.size());
  out.validity = static_cast<double>(decodable) / total;
  out.uniqueness = static_cast<double>(keys.size()) / total;
  if (top_count >= 1) {
    out.diversity = exec == kernels::Execution::parallel
                        ? kernels::mean_pairwise_distance_parallel(top_count, distance)
                        : kernels::mean_pairwise_distance_serial(top_count, distance);
  }
  return out;
}

std::string_view csv_header() {
  return "generation,consumed,top1_f,top10_f,auc_top10,hypervolume,uniqueness,validity,diversity";
}

namespace {

std::string opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string{};
}

std::optional<double> parse_opt(std::string_view field, bool& ok) {
  if (field.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string s(field);
    const double v = std::stod(s, &used);
    if (used != s.size()) ok = false;
    return v;
  } catch (...) {
    ok = false;
    return std::nullopt;
  }
}

}  // namespace

std::string to_csv_row(const MetricSnapshot& s) {
  return fmt::format("{},{},{},{},{:.6f},{:.6f},{},{},{}", s.generation, s.consumed, opt(s.top1_f),
                     opt(s.top10_f), s.auc_top10, s.hypervolume, opt(s.uniqueness),
                     opt(s.validity), opt(s.diversity));
}

std::optional<MetricSnapshot> parse_csv_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() != 9) return std::nullopt;
  bool ok = true;
  MetricSnapshot s;
  const auto gen = parse_opt(fields[0], ok);
  const auto consumed = parse_opt(fields[1], ok);
  if (!gen || !consumed) return std::nullopt;
  s.generation = static_cast<std::size_t>(*gen);
  s.consumed = static_cast<std::size_t>(*consumed);
  s.top1_f = parse_opt(fields[2], ok);
  s.top10_f = parse_opt(fields[3], ok);
  s.auc_top10 = parse_opt(fields[4], ok).value_or(0.0);
  s.hypervolume = parse_opt(fields[5], ok).value_or(0.0);
  s.uniqueness = parse_opt(fields[6], ok);
  s.validity = parse_opt(fields[7], ok);
  s.diversity = parse_opt(fields[8], ok);
  if (!ok) return std::nullopt;
  return s;
}

}  // namespace llmevo::metrics
