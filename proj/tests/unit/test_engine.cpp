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
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "llmevo/core/config.hpp"
#include "llmevo/core/engine.hpp"
#include "llmevo/core/errors.hpp"
#include "llmevo/core/events.hpp"
#include "llmevo/core/run.hpp"

using namespace llmevo;

namespace {

const char* kBase = R"(
[engine]
population_size = 10
budget = 120
k_offspring = 2
seed = 3

[problem]
kind = "synthetic"
)";

struct Harness {
  explicit Harness(std::vector<std::string> overrides = {})
      : config(parse_config(kBase, overrides)),
        problem(make_problem(config)),
        backend(make_backend(config, *problem)),
        log(&events),
        engine(config, *problem, *backend, log) {}

  RunConfig config;
  std::unique_ptr<Problem> problem;
  std::unique_ptr<llm::Backend> backend;
  std::ostringstream events;
  EventLog log;
  Engine engine;
};

std::vector<std::string> seeds(const Problem& p, std::size_t n, std::uint64_t seed = 1) {
  Rng rng(seed);
  return p.random_seeds(n, rng);
}

std::string run_to_end(std::vector<std::string> overrides = {}) {
  Harness h(std::move(overrides));
  auto state = h.engine.initialize_run(load_seeds(h.config, *h.problem));
  while (!h.engine.should_stop(*state).stop) h.engine.run_generation(*state);
  return h.events.str();
}

}  // namespace

TEST(Initialize, HundredSeeds) {
  Harness h({"engine.budget=5000", "engine.population_size=100"});
  const auto state = h.engine.initialize_run(seeds(*h.problem, 100));
  EXPECT_EQ(state->ledger.consumed(), 100u);
  EXPECT_EQ(state->generation, 0u);
  EXPECT_EQ(state->population.size(), 100u);
  EXPECT_TRUE(state->experience.memo.empty());
}

TEST(Initialize, SingleSeed) {
  Harness h({"engine.population_size=1", "engine.budget=10"});
  const auto state = h.engine.initialize_run(seeds(*h.problem, 1));
  EXPECT_EQ(state->population.size(), 1u);
  EXPECT_EQ(state->ledger.consumed(), 1u);
}

TEST(Initialize, DuplicateSeedChargedOnce) {
  Harness h;
  auto s = seeds(*h.problem, 2);
  s.push_back(s[0]);
  const auto state = h.engine.initialize_run(s);
  EXPECT_EQ(state->ledger.consumed(), 2u);
  EXPECT_EQ(state->population.size(), 2u);
}

TEST(Initialize, Refusals) {
  Harness h;
  EXPECT_THROW(h.engine.initialize_run({"not a vector", "also bad"}), ConfigError);
  Harness small({"engine.population_size=2", "engine.budget=2"});
  EXPECT_THROW(small.engine.initialize_run(seeds(*small.problem, 5)), ConfigError);
}

TEST(Initialize, PriorMemo) {
  Harness h({"experience.prior_memo=\"start here\""});
  const auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  EXPECT_EQ(state->experience.memo, "start here");
}

TEST(PairParents, ForcedCrossover) {
  Harness h({"engine.p_crossover=1.0", "engine.p_mutation=0.0"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  const auto jobs = h.engine.pair_parents(*state);
  EXPECT_EQ(jobs.size(), h.config.engine.effective_calls());
  for (const auto& j : jobs) {
    EXPECT_EQ(j.kind, JobKind::crossover);
    ASSERT_EQ(j.parents.size(), 2u);
    EXPECT_NE(j.parents[0], j.parents[1]);
  }
}

TEST(PairParents, ForcedMutation) {
  Harness h({"engine.p_crossover=0.0", "engine.p_mutation=1.0"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  for (const auto& j : h.engine.pair_parents(*state)) {
    EXPECT_EQ(j.kind, JobKind::mutation);
    EXPECT_EQ(j.parents.size(), 1u);
  }
}

TEST(PairParents, SingleMemberDowngrades) {
  Harness h({"engine.population_size=1", "engine.p_crossover=1.0", "engine.p_mutation=0.0"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 1));
  for (const auto& j : h.engine.pair_parents(*state)) {
    EXPECT_EQ(j.kind, JobKind::mutation);
    EXPECT_TRUE(j.downgraded);
  }
}

TEST(PairParents, MixtureRatio) {
  Harness h({"engine.p_crossover=0.5", "engine.p_mutation=0.5", "engine.calls_per_generation=4000"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  const auto jobs = h.engine.pair_parents(*state);
  const auto cross = std::count_if(jobs.begin(), jobs.end(),
                                   [](const VariationJob& j) { return j.kind == JobKind::crossover; });
  EXPECT_NEAR(static_cast<double>(cross) / 4000.0, 0.5, 0.04);
}

TEST(PairParents, Deterministic) {
  auto jobs_for = [] {
    Harness h({"engine.population_size=50", "engine.budget=500", "engine.calls_per_generation=25"});
    auto state = h.engine.initialize_run(seeds(*h.problem, 50));
    return h.engine.pair_parents(*state);
  };
  const auto a = jobs_for(), b = jobs_for();
  ASSERT_EQ(a.size(), 25u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].kind, b[i].kind);
    EXPECT_EQ(a[i].parents, b[i].parents);
  }
}

TEST(RunGeneration, ProposalBoundAndPopulationSize) {
  Harness h({"engine.calls_per_generation=25", "engine.budget=1000"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  const auto before = state->ledger.consumed();
  const auto report = h.engine.run_generation(*state);
  EXPECT_LE(report.counts.proposed, 50u);
  EXPECT_EQ(report.counts.jobs, 25u);
  EXPECT_EQ(state->population.size(), 10u);
  EXPECT_EQ(report.counts.consumed, state->ledger.consumed());
  EXPECT_EQ(state->ledger.consumed() - before, report.counts.novel - report.counts.evaluator_failures);
  EXPECT_EQ(state->generation, 1u);
}

TEST(RunGeneration, StopsAtLedgerBoundary) {
  Harness h({"engine.budget=13", "engine.calls_per_generation=10"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  ASSERT_EQ(state->ledger.remaining(), 3u);
  const auto report = h.engine.run_generation(*state);
  EXPECT_EQ(state->ledger.consumed(), 13u);
  EXPECT_GT(report.counts.over_budget, 0u);
  EXPECT_TRUE(h.engine.should_stop(*state).stop);
  EXPECT_EQ(h.engine.should_stop(*state).reason, "budget");
}

TEST(RunGeneration, AllCallsFailKeepsPopulation) {
  Harness h({"backend.mock.failure_rate=1.0"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  std::vector<CandidateId> before;
  for (const auto& c : state->population) before.push_back(c.id);
  const auto report = h.engine.run_generation(*state);
  EXPECT_EQ(report.counts.failed_calls, report.counts.jobs);
  EXPECT_FALSE(report.warning.empty());
  std::vector<CandidateId> after;
  for (const auto& c : state->population) after.push_back(c.id);
  EXPECT_EQ(before, after);
}

TEST(RunGeneration, SummarizerOncePerGeneration) {
  Harness h;
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  std::size_t generations = 0;
  while (!h.engine.should_stop(*state).stop) {
    const auto report = h.engine.run_generation(*state);
    ++generations;
    EXPECT_EQ(report.memo_version, generations);
  }
  EXPECT_EQ(state->cost.summarizer_calls, generations);
}

TEST(RunGeneration, ExperienceDisabled) {
  Harness h({"experience.enabled=false"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  h.engine.run_generation(*state);
  EXPECT_EQ(state->cost.summarizer_calls, 0u);
  EXPECT_TRUE(state->experience.memo.empty());
}

TEST(ShouldStop, CapAndBudget) {
  Harness h({"engine.generation_cap=2", "engine.budget=5000"});
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  EXPECT_FALSE(h.engine.should_stop(*state).stop);
  h.engine.run_generation(*state);
  h.engine.run_generation(*state);
  const auto d = h.engine.should_stop(*state);
  EXPECT_TRUE(d.stop);
  EXPECT_EQ(d.reason, "generation_cap");
}

TEST(Determinism, IdenticalEventLogs) {
  const auto a = run_to_end();
  const auto b = run_to_end();
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_NE(a, run_to_end({"engine.seed=4"}));
}

TEST(Invariants, PopulationUniqueValidAndTraceMatchesBudget) {
  Harness h;
  auto state = h.engine.initialize_run(seeds(*h.problem, 10));
  while (!h.engine.should_stop(*state).stop) {
    h.engine.run_generation(*state);
    std::set<std::string> keys;
    for (const auto& c : state->population) {
      ASSERT_TRUE(c.eval.has_value());
      EXPECT_TRUE(c.eval->valid);
      EXPECT_TRUE(keys.insert(c.canonical_key).second);
    }
    EXPECT_LE(state->population.size(), h.config.engine.population_size);
    EXPECT_EQ(state->call_trace.size(), state->ledger.consumed());
  }
  EXPECT_EQ(state->ledger.consumed(), h.config.engine.budget);
}
