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
#include <atomic>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "llmevo/core/ledger.hpp"
#include "llmevo/core/rng.hpp"
#include "llmevo/kernels/kernels.hpp"

using namespace llmevo;

TEST(Rng, ReproducibleAndSeedSensitive) {
  Rng a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    (void)c;
  }
  Rng d(123);
  EXPECT_NE(d(), c());
}

TEST(Rng, BelowAndUniformRanges) {
  Rng r(5);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70'000; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int h : hist) EXPECT_NEAR(h, 10'000, 500);
  EXPECT_EQ(r.below(0), 0u);
}

TEST(Rng, NormalMoments) {
  Rng r(8);
  double sum = 0, sq = 0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(RngStreams, IndependentNamedStreams) {
  RngStreams a(42), b(42);
  std::set<std::uint64_t> seeds;
  for (std::size_t s = 0; s < kStreamCount; ++s) seeds.insert(a.seed_of(static_cast<Stream>(s)));
  EXPECT_EQ(seeds.size(), kStreamCount);
  // Draining one stream leaves the others where they were.
  for (int i = 0; i < 1000; ++i) a[Stream::pairing]();
  EXPECT_EQ(a[Stream::selection](), b[Stream::selection]());
  EXPECT_EQ(to_string(Stream::mock_backend), "mock_backend");
}

TEST(Ledger, ExampleSequence) {
  BudgetLedger l(2);
  EXPECT_EQ(l.admit("a"), Admission::admitted);
  EXPECT_EQ(l.admit("a"), Admission::cached);
  l.commit("a", {});
  EXPECT_EQ(l.admit("a"), Admission::cached);
  EXPECT_EQ(l.admit("b"), Admission::admitted);
  EXPECT_EQ(l.admit("c"), Admission::exhausted);
  l.release("b");
  EXPECT_EQ(l.consumed(), 1u);
  EXPECT_EQ(l.admit("c"), Admission::admitted);
  l.commit("c", {});
  EXPECT_TRUE(l.exhausted());
  EXPECT_EQ(l.remaining(), 0u);
  EXPECT_EQ(l.admit("d"), Admission::exhausted);
  EXPECT_TRUE(l.lookup("a").has_value());
  EXPECT_FALSE(l.lookup("b").has_value());
  EXPECT_THROW(l.commit("zzz", {}), std::logic_error);
}

TEST(Ledger, RandomizedConcurrentInterleavings) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t budget = 5 + seed * 3;
    BudgetLedger l(budget);
    std::atomic<std::size_t> committed{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        std::mt19937_64 g(seed * 31 + static_cast<std::uint64_t>(t));
        for (int i = 0; i < 200; ++i) {
          const auto key = "k" + std::to_string(g() % 150);
          if (l.admit(key) != Admission::admitted) continue;
          if (g() % 4 == 0) {
            l.release(key);
          } else {
            l.commit(key, {});
            ++committed;
          }
          ASSERT_LE(l.consumed(), budget);
        }
      });
    }
    for (auto& t : threads) t.join();
    EXPECT_LE(l.consumed(), budget);
    EXPECT_EQ(l.consumed(), committed.load());
  }
}

TEST(Ledger, DuplicatesNeverCharge) {
  BudgetLedger l(100);
  for (int i = 0; i < 10; ++i) {
    if (l.admit("same") == Admission::admitted) l.commit("same", {});
  }
  EXPECT_EQ(l.consumed(), 1u);
}

namespace {

kernels::PointMatrix random_matrix(std::mt19937_64& g, std::size_t n, std::size_t m, bool coarse) {
  kernels::PointMatrix p(n, m);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (auto& v : p.row(i)) v = coarse ? static_cast<double>(g() % 4) : u(g);
  return p;
}

}  // namespace

TEST(Kernels, DominanceBasics) {
  const std::vector<double> a{1, 1}, b{1, 0}, c{0, 2};
  EXPECT_TRUE(kernels::dominates(a, b));
  EXPECT_FALSE(kernels::dominates(b, a));
  EXPECT_FALSE(kernels::dominates(a, a));
  EXPECT_FALSE(kernels::dominates(a, c));
}

TEST(Kernels, DominationCountsSerialEqualsParallel) {
  std::mt19937_64 g(2);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_matrix(g, 1 + g() % 300, 1 + g() % 4, t % 2 == 0);
    EXPECT_EQ(kernels::domination_counts_serial(p), kernels::domination_counts_parallel(p));
  }
}

TEST(Kernels, SortSerialEqualsParallel) {
  std::mt19937_64 g(4);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_matrix(g, 1 + g() % 200, 1 + g() % 4, t % 2 == 0);
    const auto fronts = kernels::nondominated_sort(p, kernels::Execution::serial);
    EXPECT_EQ(fronts, kernels::nondominated_sort(p, kernels::Execution::parallel));
    std::size_t total = 0;
    for (const auto& f : fronts) {
      EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
      total += f.size();
    }
    EXPECT_EQ(total, p.rows());
  }
}

TEST(Kernels, MonteCarloSerialEqualsParallel) {
  std::mt19937_64 g(6);
  kernels::MonteCarloOptions opts;
  opts.samples = 100'000;
  for (int t = 0; t < 5; ++t) {
    const auto p = random_matrix(g, 1 + g() % 10, 2 + g() % 3, false);
    const std::vector<double> ref(p.cols(), 1.1);
    EXPECT_EQ(kernels::hypervolume_mc_serial(p, ref, opts),
              kernels::hypervolume_mc_parallel(p, ref, opts));
  }
}

TEST(Kernels, MonteCarloSinglePoint) {
  kernels::PointMatrix p(2, std::vector<double>{0.1, 0.1});
  const std::vector<double> ref{1.1, 1.1};
  kernels::MonteCarloOptions opts;
  opts.samples = 400'000;
  EXPECT_NEAR(kernels::hypervolume_mc_parallel(p, ref, opts), 1.0, 0.01);
}

TEST(Kernels, PairwiseSerialEqualsParallel) {
  std::mt19937_64 g(8);
  std::vector<double> x(257);
  for (auto& v : x) v = static_cast<double>(g() % 1000) / 7.0;
  const auto dist = [&](std::size_t i, std::size_t j) { return std::abs(x[i] - x[j]); };
  for (std::size_t n : {0u, 1u, 2u, 17u, 257u}) {
    EXPECT_EQ(kernels::mean_pairwise_distance_serial(n, dist),
              kernels::mean_pairwise_distance_parallel(n, dist));
  }
  EXPECT_DOUBLE_EQ(kernels::mean_pairwise_distance_serial(2, dist), std::abs(x[0] - x[1]));
}

TEST(Kernels, ParallelForCoversRange) {
  std::vector<int> hits(1000, 0);
  kernels::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_GE(kernels::max_threads(), 1);
}
