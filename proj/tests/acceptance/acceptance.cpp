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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.
//
//   llmevo_acceptance [--work-dir DIR]

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "llmevo/cli/sweep.hpp"
#include "llmevo/core/config.hpp"
#include "llmevo/core/engine.hpp"
#include "llmevo/core/events.hpp"
#include "llmevo/core/ledger.hpp"
#include "llmevo/core/run.hpp"
#include "llmevo/experience/experience.hpp"
#include "llmevo/llm/prompt.hpp"
#include "llmevo/metrics/metrics.hpp"
#include "llmevo/objective/adapter.hpp"
#include "llmevo/problems/circle_packing.hpp"
#include "llmevo/selection/selection.hpp"

namespace fs = std::filesystem;
using namespace llmevo;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Hypervolume

// Plain Monte Carlo over the bounding box of the union, in minimization form.
double hv_monte_carlo(const std::vector<std::vector<double>>& d, double ref, std::uint64_t samples,
                      std::uint64_t seed) {
  const std::size_t m = d[0].size();
  std::vector<double> lo(m, ref);
  for (const auto& p : d)
    for (std::size_t j = 0; j < m; ++j) lo[j] = std::min(lo[j], p[j]);
  double box = 1.0;
  for (std::size_t j = 0; j < m; ++j) box *= ref - lo[j];
  std::mt19937_64 g(seed);
  std::vector<std::uniform_real_distribution<double>> u;
  for (std::size_t j = 0; j < m; ++j) u.emplace_back(lo[j], ref);
  std::vector<double> x(m);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < m; ++j) x[j] = u[j](g);
    for (const auto& p : d) {
      bool inside = true;
      for (std::size_t j = 0; j < m && inside; ++j) inside = x[j] >= p[j];
      if (inside) {
        ++hits;
        break;
      }
    }
  }
  return box * static_cast<double>(hits) / static_cast<double>(samples);
}

Outcome check_hypervolume() {
  const auto t0 = Clock::now();
  Outcome out;
  std::mt19937_64 g(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 2 + static_cast<std::size_t>(t % 2);
    const std::size_t n = 1 + g() % 10;
    std::vector<std::vector<double>> f(n, std::vector<double>(m)), d = f;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        f[i][j] = u(g);
        d[i][j] = 1.0 - f[i][j];
      }
    const double exact = metrics::hypervolume(f);
    const double mc = hv_monte_carlo(d, 1.1, 1'000'000, 1000 + static_cast<std::uint64_t>(t));
    worst = std::max(worst, std::abs(exact - mc) / mc);
  }
  if (worst > 0.01) out.pass = false;

  struct Example {
    std::vector<std::vector<double>> points;
    double expected;
  };
  const std::vector<Example> examples{{{{1.0, 1.0}}, 1.21},
                                      {{{0.5, 0.5}}, 0.36},
                                      {{{0.9, 0.2}, {0.2, 0.9}}, 0.36}};
  std::string ex;
  for (const auto& e : examples) {
    const double v = metrics::hypervolume(e.points);
    const bool ok = std::abs(v - e.expected) <= 1e-12;
    out.pass = out.pass && ok;
    ex += fmt::format(" {:.4f}{}{:.2f}", v, ok ? "==" : "!=", e.expected);
  }
  const double secs = seconds_since(t0);
  if (secs >= 30.0) out.pass = false;
  out.detail = fmt::format("max rel err vs MC {:.4f}% (tol 1%); examples{}; {:.1f}s", worst * 100,
                           ex, secs);
  return out;
}

// ---------------------------------------------------------------------------
// Fronts

std::vector<std::vector<std::size_t>> brute_fronts(const std::vector<std::vector<double>>& pts) {
  const auto dom = [](const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return false;
      strict = strict || a[i] > b[i];
    }
    return strict;
  };
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<bool> gone(pts.size(), false);
  std::size_t left = pts.size();
  while (left > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (gone[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size() && !dominated; ++j) dominated = !gone[j] && dom(pts[j], pts[i]);
      if (!dominated) front.push_back(i);
    }
    for (auto i : front) gone[i] = true;
    left -= front.size();
    fronts.push_back(std::move(front));
  }
  return fronts;
}

Outcome check_fronts() {
  std::mt19937_64 g(77);
  std::size_t mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + g() % 64, m = 1 + g() % 4;
    const int levels = (t % 3 == 0) ? 3 : 1000;
    std::vector<std::vector<double>> pts(n, std::vector<double>(m));
    for (auto& p : pts)
      for (auto& v : p) v = static_cast<double>(g() % static_cast<std::uint64_t>(levels));
    const auto expected = brute_fronts(pts);
    if (nondominated_fronts(pts, kernels::Execution::serial) != expected ||
        nondominated_fronts(pts, kernels::Execution::parallel) != expected) {
      ++mismatches;
    }
  }
  return {mismatches == 0, fmt::format("{} of 100 pools differ from brute force", mismatches)};
}

// ---------------------------------------------------------------------------
// Argmax invariance

Outcome check_argmax_invariance() {
  std::mt19937_64 g(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t broken = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + g() % 5, pool = 2 + g() % 40;
    std::vector<ObjectiveSpec> specs;
    for (std::size_t i = 0; i < m; ++i) {
      const double lo = u(g) * 20 - 10;
      specs.push_back({"f" + std::to_string(i), (g() & 1) ? Direction::maximize : Direction::minimize,
                       Bounds{lo, lo + 0.5 + u(g) * 10}, 1.0, ObjectiveSource::native});
    }
    std::vector<std::vector<double>> raw(pool, std::vector<double>(m));
    for (auto& r : raw)
      for (std::size_t i = 0; i < m; ++i) {
        const auto& b = *specs[i].bounds;
        r[i] = b.lo - 1 + u(g) * (b.hi - b.lo + 2);
      }
    // Rescale every objective with its own positive affine map.
    auto scaled_specs = specs;
    auto scaled_raw = raw;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = 0.01 + u(g) * 100, c = u(g) * 200 - 100;
      scaled_specs[i].bounds = Bounds{specs[i].bounds->lo * a + c, specs[i].bounds->hi * a + c};
      for (auto& r : scaled_raw) r[i] = r[i] * a + c;
    }
    FeedbackAdapter before(specs, {}), after(scaled_specs, {});
    std::vector<double> fb, fa;
    for (std::size_t p = 0; p < pool; ++p) {
      fb.push_back(before.complete({raw[p], {}, {}, true, {}}).fitness);
      fa.push_back(after.complete({scaled_raw[p], {}, {}, true, {}}).fitness);
    }
    bool ok = true;
    for (std::size_t i = 0; i < pool && ok; ++i)
      for (std::size_t j = 0; j < pool && ok; ++j)
        if (fb[i] > fb[j] + 1e-9) ok = fa[i] > fa[j];
    const auto best_b = std::max_element(fb.begin(), fb.end()) - fb.begin();
    const auto best_a = std::max_element(fa.begin(), fa.end()) - fa.begin();
    if (std::abs(fb[static_cast<std::size_t>(best_a)] - fb[static_cast<std::size_t>(best_b)]) > 1e-9) ok = false;
    if (!ok) ++broken;
  }
  return {broken == 0, fmt::format("{} of 200 pools changed ranking", broken)};
}

// ---------------------------------------------------------------------------
// AUC

Outcome check_auc() {
  const std::vector<double> full{0.2, 0.6, 0.4, 0.8}, partial{0.2, 0.6};
  const double a = metrics::auc_top_k(full, 1, 4), b = metrics::auc_top_k(partial, 1, 4);
  bool constant_ok = true;
  for (std::size_t k : {1u, 5u, 10u}) {
    const std::vector<double> trace(37, 0.42);
    constant_ok = constant_ok && std::abs(metrics::auc_top_k(trace, k, 100) - 0.42) < 1e-12;
  }
  const bool pass = std::abs(a - 0.55) < 1e-12 && std::abs(b - 0.5) < 1e-12 && constant_ok;
  return {pass, fmt::format("hand traces {:.12g}, {:.12g}; constant trace {}", a, b,
                            constant_ok ? "exact" : "off")};
}

// ---------------------------------------------------------------------------
// Budget ledger

Outcome check_ledger() {
  std::size_t violations = 0, runs = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 g(seed);
    const std::size_t budget = 1 + g() % 60;

    // Sequential replay: every operation's charge is checked exactly.
    BudgetLedger ledger(budget);
    std::set<std::string> committed;
    for (int i = 0; i < 1000; ++i) {
      const auto roll = g() % 10;
      const auto before = ledger.consumed();
      if (roll < 2) continue;  // undecodable: never reaches the ledger
      const auto key = fmt::format("k{}", roll < 5 ? g() % 8 : g() % 500);
      const auto a = ledger.admit(key);
      if (a == Admission::admitted) {
        if (g() % 5 == 0) {
          ledger.release(key);  // oracle produced nothing
          if (ledger.consumed() != before) ++violations;
        } else {
          ledger.commit(key, {});
          committed.insert(key);
          if (ledger.consumed() != before + 1) ++violations;
        }
      } else {
        if (ledger.consumed() != before) ++violations;
        if (a == Admission::cached && !committed.contains(key)) ++violations;
        if (a == Admission::exhausted && ledger.consumed() < budget) ++violations;
      }
    }
    if (ledger.consumed() != committed.size() || ledger.consumed() > budget) ++violations;

    // Concurrent interleavings: the bound holds under contention.
    BudgetLedger shared(budget);
    std::atomic<std::size_t> over{0}, commits{0};
    {
      std::vector<std::jthread> threads;
      for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
          std::mt19937_64 r(seed * 7919 + static_cast<std::uint64_t>(t));
          for (int i = 0; i < 300; ++i) {
            const auto key = fmt::format("k{}", r() % 200);
            if (shared.admit(key) == Admission::admitted) {
              if (r() % 5 == 0) {
                shared.release(key);
              } else {
                shared.commit(key, {});
                ++commits;
              }
            }
            if (shared.consumed() > budget) ++over;
          }
        });
      }
    }
    violations += over.load();
    if (shared.consumed() != commits.load()) ++violations;
    ++runs;
  }

  // Engine replay: undecodable proposals and duplicates are never charged.
  const auto config = parse_config(R"(
[engine]
population_size = 10
budget = 150
seed = 5
[backend.mock]
invalid_rate = 0.4
[problem]
kind = "text_toy"
)");
  const auto problem = make_problem(config);
  const auto backend = make_backend(config, *problem);
  EventLog log;
  Engine engine(config, *problem, *backend, log);
  auto state = engine.initialize_run(load_seeds(config, *problem));
  std::size_t undecodable = 0, duplicates = 0;
  while (!engine.should_stop(*state).stop) {
    const auto before = state->ledger.consumed();
    const auto r = engine.run_generation(*state);
    undecodable += r.counts.proposed - r.counts.decodable;
    duplicates += r.counts.duplicates;
    if (state->ledger.consumed() - before != r.counts.novel - r.counts.evaluator_failures) ++violations;
  }
  if (state->ledger.consumed() > config.engine.budget) ++violations;
  return {violations == 0,
          fmt::format("{} randomized ledgers, engine replay with {} undecodable and {} duplicate "
                      "proposals; {} violations",
                      runs, undecodable, duplicates, violations)};
}

// ---------------------------------------------------------------------------
// Injection

Outcome check_injection() {
  Experience memo{"memo", 1, {}};
  int lo = 1000, hi = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    int hits = 0;
    for (int i = 0; i < 1000; ++i) hits += maybe_inject(memo, 0.5, rng).has_value();
    lo = std::min(lo, hits);
    hi = std::max(hi, hits);
  }
  Rng rng(1);
  int at0 = 0, at1 = 0;
  for (int i = 0; i < 1000; ++i) {
    at0 += maybe_inject(memo, 0.0, rng).has_value();
    at1 += maybe_inject(memo, 1.0, rng).has_value();
  }
  const bool pass = lo >= 450 && hi <= 550 && at0 == 0 && at1 == 1000;
  return {pass, fmt::format("p=0.5 over 100 seeds: {}..{} of 1000; p=0 {}; p=1 {}", lo, hi, at0, at1)};
}

// ---------------------------------------------------------------------------
// Determinism

const char* kSyntheticConfig = R"(
[engine]
population_size = 20
budget = 200
k_offspring = 2
seed = 7
[problem]
kind = "synthetic"
[problem.synthetic]
objectives = 2
dims = 4
)";

Outcome check_determinism(const fs::path& work) {
  const auto t0 = Clock::now();
  const auto config = parse_config(kSyntheticConfig);
  const auto a = execute_run(config, work / "determinism_a");
  const auto b = execute_run(config, work / "determinism_b");
  const double secs = seconds_since(t0);
  const bool events_equal = slurp(a.directory / "events.jsonl") == slurp(b.directory / "events.jsonl");
  const bool metrics_equal = slurp(a.directory / "metrics.csv") == slurp(b.directory / "metrics.csv");
  const bool pass = !a.failed && !b.failed && events_equal && metrics_equal && secs < 10.0 &&
                    a.final_snapshot.consumed == 200;
  return {pass, fmt::format("events.jsonl {}, metrics.csv {}; {:.2f}s for two B=200 runs",
                            events_equal ? "identical" : "DIFFER",
                            metrics_equal ? "identical" : "DIFFER", secs)};
}

// ---------------------------------------------------------------------------
// Circle packing

double best_radius_sum(const std::vector<Candidate>& population) {
  double best = 0.0;
  for (const auto& c : population) {
    if (c.eval && c.eval->valid) best = std::max(best, c.eval->raw.at(0));
  }
  return best;
}

Outcome check_circle_packing() {
  const auto t0 = Clock::now();
  std::mt19937_64 g(99);
  std::uniform_real_distribution<double> pos(0.0, 1.0), rad(0.01, 0.3);
  double min1 = 1.0, max1 = 0.0, min2 = 10.0, min4 = 10.0;
  bool feasible = true;
  for (int t = 0; t < 20; ++t) {
    for (std::size_t n : {1u, 2u, 4u}) {
      circles::Layout l(n);
      for (auto& c : l) c = {pos(g), pos(g), rad(g)};
      const auto r = circles::repair(l);
      feasible = feasible && circles::is_feasible(r.layout);
      const double s = circles::radius_sum(r.layout);
      if (n == 1) {
        min1 = std::min(min1, s);
        max1 = std::max(max1, s);
      } else if (n == 2) {
        min2 = std::min(min2, s);
      } else {
        min4 = std::min(min4, s);
      }
    }
  }
  const double repair_secs = seconds_since(t0);
  const bool repair_ok = feasible && std::abs(min1 - 0.5) <= 1e-6 && std::abs(max1 - 0.5) <= 1e-6 &&
                         min2 >= 0.556 && min4 >= 0.9 && repair_secs < 60.0;

  // Mock optimization, n = 4, B = 500, 20 seeds run concurrently.
  const auto t1 = Clock::now();
  std::vector<int> improved(20, 0);
  std::vector<double> gains(20, 0.0);
  std::vector<std::string> errors(20);
  {
    std::vector<std::jthread> pool;
    std::atomic<std::size_t> next{0};
    const auto workers = std::max(1u, std::min(20u, std::thread::hardware_concurrency()));
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s; (s = next++) < 20;) {
          try {
            const auto config = parse_config(fmt::format(R"(
[engine]
population_size = 20
budget = 500
k_offspring = 2
seed = {}
[problem]
kind = "circle_packing"
[problem.circle_packing]
circles = 4
)",
                                                         s + 1));
            const auto problem = make_problem(config);
            const auto backend = make_backend(config, *problem);
            EventLog log;
            Engine engine(config, *problem, *backend, log);
            auto state = engine.initialize_run(load_seeds(config, *problem));
            const double initial = best_radius_sum(state->population);
            while (!engine.should_stop(*state).stop) engine.run_generation(*state);
            const double final_best = best_radius_sum(state->population);
            gains[s] = final_best - initial;
            improved[s] = final_best > initial ? 1 : 0;
          } catch (const std::exception& e) {
            errors[s] = e.what();
          }
        }
      });
    }
  }
  const int wins = std::accumulate(improved.begin(), improved.end(), 0);
  const auto error_count = std::count_if(errors.begin(), errors.end(),
                                         [](const std::string& e) { return !e.empty(); });
  const double opt_secs = seconds_since(t1);
  const bool pass = repair_ok && wins >= 18 && error_count == 0;
  return {pass, fmt::format("repair n=1 {:.9f}..{:.9f}, n=2 min {:.4f}, n=4 min {:.4f}, {:.1f}s; "
                            "optimization improved {}/20 seeds (median gain {:.2e}), {:.1f}s{}",
                            min1, max1, min2, min4, repair_secs, wins,
                            [&] {
                              auto g2 = gains;
                              std::sort(g2.begin(), g2.end());
                              return (g2[9] + g2[10]) / 2;
                            }(),
                            opt_secs, error_count ? fmt::format("; {} runs errored", error_count) : "")};
}

// ---------------------------------------------------------------------------
// k sweep

Outcome check_k_sweep(const fs::path& work) {
  cli::SweepOptions options;
  options.axis = "k_offspring";
  options.values = {"1", "2", "3"};
  options.repeats = 2;
  options.parallel = true;
  const auto result = cli::run_sweep(kSyntheticConfig, options, work / "k_sweep");
  bool well_formed = result.rows.size() == 3 && fs::exists(work / "k_sweep" / "sweep.csv") &&
                     result.table.find("±") != std::string::npos;
  std::vector<double> calls;
  for (const auto& row : result.rows) {
    well_formed = well_formed && row.completed == 2 && row.failed == 0 && row.top10 && row.auc_top10 &&
                  row.hypervolume && row.backend_calls;
    if (row.backend_calls) calls.push_back(row.backend_calls->mean);
  }
  const bool decreasing = calls.size() == 3 && calls[0] > calls[1] && calls[1] > calls[2];
  return {well_formed && decreasing,
          fmt::format("table {}; mean backend calls k=1,2,3: {}", well_formed ? "well-formed" : "MALFORMED",
                      fmt::join(calls, ", "))};
}

// ---------------------------------------------------------------------------
// Parser fuzz

Outcome check_parser_fuzz() {
  std::mt19937_64 g(31337);
  const std::vector<std::string> fragments{"<candidate>", "</candidate>", "<candidate", "candidate>",
                                           "</", "<", ">", "\n", " "};
  std::size_t faults = 0, extracted = 0;
  for (int t = 0; t < 100'000; ++t) {
    std::string s;
    const std::size_t len = g() % 256;
    while (s.size() < len) {
      if (g() % 4 == 0) {
        s += fragments[g() % fragments.size()];
      } else {
        s.push_back(static_cast<char>(g() & 0xff));
      }
    }
    try {
      const auto r = llm::parse_candidates(s, 1 + g() % 4);
      extracted += r.candidates.size();
      for (const auto& c : r.candidates) {
        if (c.empty() || c.find(llm::kOpenTag) != std::string::npos ||
            c.find(llm::kCloseTag) != std::string::npos) {
          ++faults;
        }
      }
    } catch (...) {
      ++faults;
    }
  }
  return {faults == 0, fmt::format("100000 strings, {} candidates extracted, {} faults", extracted, faults)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"llmevo acceptance checks"};
  std::string work_dir = "acceptance_runs";
  app.add_option("--work-dir", work_dir, "Scratch directory for run outputs");
  CLI11_PARSE(app, argc, argv);
  const fs::path work(work_dir);
  fs::remove_all(work);
  fs::create_directories(work);

  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"hypervolume correctness", check_hypervolume},
      {"non-dominated fronts vs brute force", check_fronts},
      {"argmax invariance under affine rescaling", check_argmax_invariance},
      {"AUC unit cases", check_auc},
      {"budget ledger", check_ledger},
      {"experience injection rate", check_injection},
      {"determinism", [&] { return check_determinism(work); }},
      {"circle packing", check_circle_packing},
      {"k-offspring sweep", [&] { return check_k_sweep(work); }},
      {"parser fuzz", check_parser_fuzz},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failed += o.pass ? 0 : 1;
    fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", c.name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
             criteria.size());
  return failed == 0 ? 0 : 1;
}
