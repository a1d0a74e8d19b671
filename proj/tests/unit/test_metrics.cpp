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

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "llmevo/metrics/metrics.hpp"

using namespace llmevo;
using namespace llmevo::metrics;

namespace {

// Union volume of boxes [1 - f, ref] by inclusion-exclusion over subsets.
double hv_inclusion_exclusion(const std::vector<std::vector<double>>& pts, double ref) {
  const std::size_t n = pts.size();
  if (n == 0) return 0.0;
  const std::size_t m = pts[0].size();
  double total = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    double vol = 1.0;
    for (std::size_t d = 0; d < m; ++d) {
      double lo = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) lo = std::max(lo, 1.0 - pts[i][d]);
      }
      vol *= std::max(0.0, ref - lo);
    }
    total += (std::popcount(mask) % 2 == 1) ? vol : -vol;
  }
  return total;
}

std::vector<std::vector<double>> random_points(std::mt19937_64& g, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts(n, std::vector<double>(m));
  for (auto& p : pts)
    for (auto& v : p) v = u(g);
  return pts;
}

std::vector<KeyedFitness> keyed(const std::vector<std::string>& keys, const std::vector<double>& f) {
  std::vector<KeyedFitness> out;
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back({keys[i], f[i]});
  return out;
}

}  // namespace

TEST(TopKMean, FewerThanK) {
  const std::vector<std::string> keys{"a"};
  EXPECT_DOUBLE_EQ(*top_k_mean(keyed(keys, {4.0}), 10), 4.0);
}

TEST(TopKMean, SortAndMean) {
  const std::vector<std::string> keys{"a", "b", "c", "d"};
  EXPECT_DOUBLE_EQ(*top_k_mean(keyed(keys, {1, 2, 3, 4}), 2), 3.5);
}

TEST(TopKMean, EmptyIsAbsent) { EXPECT_FALSE(top_k_mean({}, 10).has_value()); }

TEST(TopKMean, DuplicateKeysCountOnce) {
  const std::vector<std::string> keys{"a", "a", "b"};
  EXPECT_DOUBLE_EQ(*top_k_mean(keyed(keys, {5, 5, 1}), 2), 3.0);
}

TEST(TopKMean, ConstantForAnyK) {
  const std::vector<std::string> keys{"a", "b", "c", "d", "e"};
  for (std::size_t k = 1; k <= 7; ++k) {
    EXPECT_DOUBLE_EQ(*top_k_mean(keyed(keys, {2.5, 2.5, 2.5, 2.5, 2.5}), k), 2.5);
  }
}

TEST(AucTopK, HandTracedSequences) {
  const std::vector<double> full{0.2, 0.6, 0.4, 0.8};
  EXPECT_DOUBLE_EQ(auc_top_k(full, 1, 4), 0.55);
  const std::vector<double> short_trace{0.2, 0.6};
  EXPECT_DOUBLE_EQ(auc_top_k(short_trace, 1, 4), 0.5);
}

TEST(AucTopK, ConstantTrace) {
  for (std::size_t k : {1u, 3u, 10u}) {
    const std::vector<double> trace(17, 0.7);
    EXPECT_NEAR(auc_top_k(trace, k, 40), 0.7, 1e-15);
  }
}

TEST(AucTopK, EmptyAndOverlong) {
  EXPECT_EQ(auc_top_k({}, 10, 100), 0.0);
  const std::vector<double> trace(5, 1.0);
  EXPECT_THROW(auc_top_k(trace, 1, 4), std::invalid_argument);
}

TEST(AucTopK, BoundsProperty) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + g() % 60;
    const std::size_t budget = n + g() % 40;
    const std::size_t k = 1 + g() % 12;
    std::vector<double> trace(n);
    for (auto& v : trace) v = u(g);
    // Oracle: recompute the running top-k mean directly.
    std::vector<double> seen;
    double sum = 0.0, last = 0.0, max_running = 0.0;
    for (double v : trace) {
      seen.push_back(v);
      auto sorted = seen;
      std::sort(sorted.rbegin(), sorted.rend());
      const std::size_t take = std::min(k, sorted.size());
      last = std::accumulate(sorted.begin(), sorted.begin() + static_cast<long>(take), 0.0) /
             static_cast<double>(take);
      max_running = std::max(max_running, last);
      sum += last;
    }
    sum += last * static_cast<double>(budget - n);
    const double auc = auc_top_k(trace, k, budget);
    EXPECT_NEAR(auc, sum / static_cast<double>(budget), 1e-12);
    EXPECT_GE(auc, *std::min_element(trace.begin(), trace.end()) - 1e-12);
    EXPECT_LE(auc, max_running + 1e-12);
  }
}

TEST(Hypervolume, WorkedExamples) {
  EXPECT_NEAR(hypervolume({{1.0, 1.0}}), 1.21, 1e-12);
  EXPECT_NEAR(hypervolume({{0.5, 0.5}}), 0.36, 1e-12);
  // Boxes of 0.3 each overlapping in 0.3 x 0.3.
  EXPECT_NEAR(hypervolume({{0.9, 0.2}, {0.2, 0.9}}), 0.51, 1e-12);
  EXPECT_EQ(hypervolume({}), 0.0);
}

TEST(Hypervolume, ExactMatchesInclusionExclusion) {
  std::mt19937_64 g(3);
  for (std::size_t m = 1; m <= 4; ++m) {
    for (int t = 0; t < 40; ++t) {
      const auto pts = random_points(g, 1 + g() % 9, m);
      EXPECT_NEAR(hypervolume(pts), hv_inclusion_exclusion(pts, 1.1), 1e-10)
          << "m=" << m << " t=" << t;
    }
  }
}

TEST(Hypervolume, MonotoneAndBounded) {
  std::mt19937_64 g(5);
  for (std::size_t m = 2; m <= 4; ++m) {
    for (int t = 0; t < 30; ++t) {
      auto pts = random_points(g, 1 + g() % 8, m);
      const double before = hypervolume(pts);
      EXPECT_LE(before, std::pow(1.1, static_cast<double>(m)) + 1e-12);
      auto dominated = pts[0];
      for (auto& v : dominated) v *= 0.5;
      pts.push_back(dominated);
      EXPECT_NEAR(hypervolume(pts), before, 1e-12);
      pts.push_back(random_points(g, 1, m)[0]);
      EXPECT_GE(hypervolume(pts), before - 1e-12);
    }
  }
}

TEST(Hypervolume, MonteCarloAboveExactLimit) {
  std::mt19937_64 g(9);
  const auto pts = random_points(g, 6, 5);
  const double exact = hv_inclusion_exclusion(pts, 1.1);
  HypervolumeOptions opts;
  opts.mc_samples = 400'000;
  const double mc = hypervolume(pts, opts);
  EXPECT_NEAR(mc, exact, 0.02 * exact);
  EXPECT_EQ(mc, hypervolume(pts, opts));
}

TEST(Hypervolume, ExactSweepAgainstKernelMonteCarlo) {
  std::mt19937_64 g(21);
  kernels::MonteCarloOptions mc;
  mc.samples = 1'000'000;
  for (int t = 0; t < 5; ++t) {
    const auto pts = random_points(g, 1 + g() % 10, 3);
    kernels::PointMatrix minimization(3, std::vector<double>{});
    for (const auto& p : pts) {
      std::vector<double> d{1 - p[0], 1 - p[1], 1 - p[2]};
      minimization.push_row(d);
    }
    const std::vector<double> ref(3, 1.1);
    const double exact = hypervolume_exact(minimization, ref);
    EXPECT_NEAR(kernels::hypervolume_mc_parallel(minimization, ref, mc), exact, 0.01 * exact);
  }
}

TEST(PopulationStats, UniquenessAndValidity) {
  const std::vector<Proposal> props{{"a", true}, {"a", true}, {"b", true}};
  const auto s = population_stats(props, 0, [](std::size_t, std::size_t) { return 0.0; });
  EXPECT_NEAR(*s.uniqueness, 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(*s.validity, 1.0);
  EXPECT_FALSE(s.diversity.has_value());
}

TEST(PopulationStats, TwoUndecodableOfTen) {
  std::vector<Proposal> props;
  for (int i = 0; i < 10; ++i) props.push_back({"k" + std::to_string(i), i >= 2});
  const auto s = population_stats(props, 0, [](std::size_t, std::size_t) { return 0.0; });
  EXPECT_DOUBLE_EQ(*s.validity, 0.8);
}

TEST(PopulationStats, EmptyIsAbsent) {
  const auto s = population_stats({}, 0, [](std::size_t, std::size_t) { return 0.0; });
  EXPECT_FALSE(s.uniqueness || s.validity || s.diversity);
}

TEST(PopulationStats, DiversityIsMeanPairwise) {
  // Items 0 and 1 are identical payloads; 2 is far from both.
  const std::vector<double> pos{0.0, 0.0, 0.9};
  const auto dist = [&](std::size_t i, std::size_t j) { return std::abs(pos[i] - pos[j]); };
  const std::vector<Proposal> props{{"x", true}, {"y", true}, {"z", true}};
  const auto s = population_stats(props, 3, dist, kernels::Execution::serial);
  EXPECT_NEAR(*s.diversity, (0.0 + 0.9 + 0.9) / 3.0, 1e-15);
}

TEST(MetricsCsv, RoundTrip) {
  MetricSnapshot s;
  s.generation = 3;
  s.consumed = 120;
  s.top1_f = 1.25;
  s.auc_top10 = 0.5;
  s.hypervolume = 0.75;
  s.validity = 1.0;
  EXPECT_EQ(csv_header(),
            "generation,consumed,top1_f,top10_f,auc_top10,hypervolume,uniqueness,validity,diversity");
  const auto row = to_csv_row(s);
  const auto back = parse_csv_row(row);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->generation, 3u);
  EXPECT_EQ(back->consumed, 120u);
  EXPECT_DOUBLE_EQ(*back->top1_f, 1.25);
  EXPECT_FALSE(back->top10_f.has_value());
  EXPECT_FALSE(back->uniqueness.has_value());
  EXPECT_FALSE(parse_csv_row("1,2,3").has_value());
  EXPECT_FALSE(parse_csv_row("a,2,,,0,0,,,").has_value());
}
