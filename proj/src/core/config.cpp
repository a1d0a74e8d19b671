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

#include "llmevo/core/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "llmevo/core/errors.hpp"

namespace llmevo {

std::size_t EngineConfig::effective_calls() const noexcept {
  if (calls_per_generation > 0) return calls_per_generation;
  const std::size_t k = std::max<std::size_t>(1, k_offspring);
  return std::max<std::size_t>(1, (population_size + k - 1) / k);
}

std::size_t EngineConfig::effective_initial_size() const noexcept {
  return initial_size > 0 ? initial_size : population_size;
}

namespace {

class Reader {
 public:
  std::vector<std::string> errors;

  /// Returns the sub-table at `path` (empty when absent) and checks its keys.
  const toml::table* section(const toml::table& root, std::string_view path,
                             std::set<std::string> allowed) {
    const toml::node* node = root.at_path(path).node();
    if (!node) return nullptr;
    const auto* table = node->as_table();
    if (!table) {
      errors.push_back(fmt::format("{}: expected a table", path));
      return nullptr;
    }
    for (const auto& [key, value] : *table) {
      if (!allowed.contains(std::string(key.str()))) {
        errors.push_back(fmt::format("{}.{}: unknown field", path, key.str()));
      }
    }
    return table;
  }

  void read(const toml::table* t, std::string_view path, std::string_view key, std::size_t& out) {
    const auto* n = find(t, key);
    if (!n) return;
    const auto v = n->value<std::int64_t>();
    if (!n->is_integer() || !v || *v < 0) {
      errors.push_back(fmt::format("{}.{}: expected a non-negative integer", path, key));
      return;
    }
    out = static_cast<std::size_t>(*v);
  }

  void read(const toml::table* t, std::string_view path, std::string_view key, std::uint64_t& out,
            bool) {
    std::size_t v = out;
    read(t, path, key, v);
    out = v;
  }

  void read(const toml::table* t, std::string_view path, std::string_view key, double& out) {
    const auto* n = find(t, key);
    if (!n) return;
    const auto v = n->value<double>();
    if (!(n->is_floating_point() || n->is_integer()) || !v || !std::isfinite(*v)) {
      errors.push_back(fmt::format("{}.{}: expected a finite number", path, key));
      return;
    }
    out = *v;
  }

  void read(const toml::table* t, std::string_view path, std::string_view key, bool& out) {
    const auto* n = find(t, key);
    if (!n) return;
    if (!n->is_boolean()) {
      errors.push_back(fmt::format("{}.{}: expected true or false", path, key));
      return;
    }
    out = *n->value<bool>();
  }

  void read(const toml::table* t, std::string_view path, std::string_view key, std::string& out) {
    const auto* n = find(t, key);
    if (!n) return;
    if (!n->is_string()) {
      errors.push_back(fmt::format("{}.{}: expected a string", path, key));
      return;
    }
    out = *n->value<std::string>();
  }

  void read(const toml::table* t, std::string_view path, std::string_view key,
            std::vector<std::string>& out) {
    const auto* n = find(t, key);
    if (!n) return;
    const auto* arr = n->as_array();
    if (!arr || (!arr->empty() && !arr->is_homogeneous(toml::node_type::string))) {
      errors.push_back(fmt::format("{}.{}: expected an array of strings", path, key));
      return;
    }
    out.clear();
    for (const auto& e : *arr) out.push_back(*e.value<std::string>());
  }

  void read(const toml::table* t, std::string_view path, std::string_view key,
            std::vector<std::pair<std::string, double>>& out) {
    const auto* n = find(t, key);
    if (!n) return;
    const auto* table = n->as_table();
    if (!table) {
      errors.push_back(fmt::format("{}.{}: expected a table of numbers", path, key));
      return;
    }
    out.clear();
    for (const auto& [name, value] : *table) {
      const auto v = value.value<double>();
      if (!v || !std::isfinite(*v)) {
        errors.push_back(fmt::format("{}.{}.{}: expected a finite number", path, key, name.str()));
        continue;
      }
      out.emplace_back(std::string(name.str()), *v);
    }
  }

  void read(const toml::table* t, std::string_view path, std::string_view key,
            std::vector<llm::ObjectiveDescription>& out) {
    const auto* n = find(t, key);
    if (!n) return;
    const auto* table = n->as_table();
    if (!table) {
      errors.push_back(fmt::format("{}.{}: expected a table of strings", path, key));
      return;
    }
    out.clear();
    for (const auto& [name, value] : *table) {
      const auto v = value.value<std::string>();
      if (!v) {
        errors.push_back(fmt::format("{}.{}.{}: expected a string", path, key, name.str()));
        continue;
      }
      out.push_back({std::string(name.str()), *v});
    }
  }

  void check(bool ok, std::string message) {
    if (!ok) errors.push_back(std::move(message));
  }

 private:
  static const toml::node* find(const toml::table* t, std::string_view key) {
    return t ? t->get(key) : nullptr;
  }
};

void apply_override(toml::table& root, const std::string& override_text,
                    std::vector<std::string>& errors) {
  const auto eq = override_text.find('=');
  if (eq == std::string::npos || eq == 0) {
    errors.push_back(fmt::format("override '{}': expected key=value", override_text));
    return;
  }
  const std::string path = override_text.substr(0, eq);
  const std::string value_text = override_text.substr(eq + 1);

  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  if (parts.size() < 2) {
    errors.push_back(fmt::format("override '{}': key needs a section, e.g. engine.seed", path));
    return;
  }

  toml::table* table = &root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    auto* next = table->get(parts[i]);
    if (!next) {
      table->insert(parts[i], toml::table{});
      next = table->get(parts[i]);
    }
    table = next->as_table();
    if (!table) {
      errors.push_back(fmt::format("override '{}': {} is not a table", path, parts[i]));
      return;
    }
  }

  toml::table scratch;
  try {
    scratch = toml::parse("v = " + value_text);
  } catch (const toml::parse_error&) {
    scratch = toml::table{{"v", value_text}};
  }
  table->insert_or_assign(parts.back(), std::move(*scratch.get("v")));
}

RunConfig from_table(const toml::table& root, std::vector<std::string> overrides) {
  Reader r;
  RunConfig c;
  c.overrides = std::move(overrides);

  for (const auto& [key, value] : root) {
    static const std::set<std::string> top = {"engine", "experience", "backend", "problem",
                                              "overrides"};
    if (!top.contains(std::string(key.str()))) {
      r.errors.push_back(fmt::format("{}: unknown section", key.str()));
    }
  }

  // [engine]
  if (const auto* t = r.section(root, "engine",
                                {"population_size", "budget", "k_offspring", "p_exp",
                                 "p_crossover", "p_mutation", "calls_per_generation", "seed",
                                 "selector", "generation_cap", "initial_size", "seeds_file",
                                 "feedback_chars", "hv_mc_samples"})) {
    auto& e = c.engine;
    r.read(t, "engine", "population_size", e.population_size);
    r.read(t, "engine", "budget", e.budget);
    r.read(t, "engine", "k_offspring", e.k_offspring);
    r.read(t, "engine", "p_exp", e.p_exp);
    r.read(t, "engine", "p_crossover", e.p_crossover);
    r.read(t, "engine", "p_mutation", e.p_mutation);
    r.read(t, "engine", "calls_per_generation", e.calls_per_generation);
    r.read(t, "engine", "seed", e.seed, true);
    std::string selector(to_string(e.selector));
    r.read(t, "engine", "selector", selector);
    if (auto s = parse_selector(selector)) {
      e.selector = *s;
    } else {
      r.errors.push_back(fmt::format(
          "engine.selector: '{}' is not one of hybrid, fitness_only, pareto_only", selector));
    }
    r.read(t, "engine", "generation_cap", e.generation_cap);
    r.read(t, "engine", "initial_size", e.initial_size);
    r.read(t, "engine", "seeds_file", e.seeds_file);
    r.read(t, "engine", "feedback_chars", e.feedback_chars);
    r.read(t, "engine", "hv_mc_samples", e.hv_mc_samples, true);
  }

  // [experience]
  if (const auto* t = r.section(root, "experience",
                                {"enabled", "good_count", "bad_count", "word_cap", "prior_memo"})) {
    auto& x = c.experience;
    r.read(t, "experience", "enabled", x.enabled);
    r.read(t, "experience", "good_count", x.good_count);
    r.read(t, "experience", "bad_count", x.bad_count);
    r.read(t, "experience", "word_cap", x.word_cap);
    r.read(t, "experience", "prior_memo", x.prior_memo);
  }

  // [backend]
  if (const auto* t = r.section(root, "backend",
                                {"kind", "parallelism", "price_input", "price_output", "mock",
                                 "remote", "retry"})) {
    auto& b = c.backend;
    r.read(t, "backend", "kind", b.kind);
    r.read(t, "backend", "parallelism", b.parallelism);
    r.read(t, "backend", "price_input", b.price_input);
    r.read(t, "backend", "price_output", b.price_output);
  }
  if (const auto* t = r.section(root, "backend.mock",
                                {"invalid_rate", "failure_rate", "fail_summarizer"})) {
    auto& m = c.backend.mock;
    r.read(t, "backend.mock", "invalid_rate", m.invalid_rate);
    r.read(t, "backend.mock", "failure_rate", m.failure_rate);
    r.read(t, "backend.mock", "fail_summarizer", m.fail_summarizer);
  }
  if (const auto* t = r.section(root, "backend.remote",
                                {"base_url", "model", "temperature", "max_tokens", "api_key_env",
                                 "timeout_s"})) {
    auto& rm = c.backend.remote;
    r.read(t, "backend.remote", "base_url", rm.base_url);
    r.read(t, "backend.remote", "model", rm.model);
    r.read(t, "backend.remote", "temperature", rm.temperature);
    r.read(t, "backend.remote", "max_tokens", rm.max_tokens);
    r.read(t, "backend.remote", "api_key_env", rm.api_key_env);
    std::size_t timeout = static_cast<std::size_t>(rm.timeout.count());
    r.read(t, "backend.remote", "timeout_s", timeout);
    rm.timeout = std::chrono::seconds(timeout);
  }
  if (const auto* t = r.section(root, "backend.retry",
                                {"attempts", "base_delay_ms", "max_delay_ms", "multiplier"})) {
    auto& rp = c.backend.remote.retry;
    r.read(t, "backend.retry", "attempts", rp.attempts);
    std::size_t base = static_cast<std::size_t>(rp.base_delay.count());
    std::size_t max = static_cast<std::size_t>(rp.max_delay.count());
    r.read(t, "backend.retry", "base_delay_ms", base);
    r.read(t, "backend.retry", "max_delay_ms", max);
    r.read(t, "backend.retry", "multiplier", rp.multiplier);
    rp.base_delay = std::chrono::milliseconds(base);
    rp.max_delay = std::chrono::milliseconds(max);
  }

  // [problem]
  if (const auto* t = r.section(root, "problem",
                                {"kind", "weights", "circle_packing", "synthetic", "text_toy",
                                 "external"})) {
    r.read(t, "problem", "kind", c.problem.kind);
    r.read(t, "problem", "weights", c.problem.weights);
  }
  if (const auto* t = r.section(root, "problem.circle_packing",
                                {"circles", "repair", "promote_constraints", "repair_iterations",
                                 "seed_radius_lo", "seed_radius_hi"})) {
    auto& cp = c.problem.circles;
    const std::string_view p = "problem.circle_packing";
    r.read(t, p, "circles", cp.circles);
    r.read(t, p, "repair", cp.repair);
    r.read(t, p, "promote_constraints", cp.promote_constraints);
    r.read(t, p, "repair_iterations", cp.repair_options.iterations);
    r.read(t, p, "seed_radius_lo", cp.seed_radius_lo);
    r.read(t, p, "seed_radius_hi", cp.seed_radius_hi);
  }
  if (const auto* t = r.section(root, "problem.synthetic",
                                {"dims", "objectives", "shape", "mutation_sigma"})) {
    auto& s = c.problem.synthetic;
    r.read(t, "problem.synthetic", "dims", s.dims);
    r.read(t, "problem.synthetic", "objectives", s.objectives);
    r.read(t, "problem.synthetic", "shape", s.shape);
    r.read(t, "problem.synthetic", "mutation_sigma", s.mutation_sigma);
  }
  if (const auto* t = r.section(root, "problem.text_toy", {"target", "alphabet"})) {
    r.read(t, "problem.text_toy", "target", c.problem.text.target);
    r.read(t, "problem.text_toy", "alphabet", c.problem.text.alphabet);
  }
  if (const auto* t = r.section(root, "problem.external",
                                {"command", "workers", "handshake_timeout_s", "request_timeout_s",
                                 "max_restarts", "promote", "task_description", "output_format",
                                 "mutation_instruction", "crossover_instruction",
                                 "additional_requirements", "objective_descriptions"})) {
    auto& x = c.problem.external;
    const std::string_view p = "problem.external";
    r.read(t, p, "command", x.command);
    r.read(t, p, "workers", x.workers);
    r.read(t, p, "handshake_timeout_s", x.handshake_timeout_s);
    r.read(t, p, "request_timeout_s", x.request_timeout_s);
    r.read(t, p, "max_restarts", x.max_restarts);
    r.read(t, p, "promote", x.promote);
    r.read(t, p, "task_description", x.task.task_description);
    r.read(t, p, "output_format", x.task.output_format);
    r.read(t, p, "mutation_instruction", x.task.mutation_instruction);
    r.read(t, p, "crossover_instruction", x.task.crossover_instruction);
    r.read(t, p, "additional_requirements", x.task.additional_requirements);
    r.read(t, p, "objective_descriptions", x.task.objective_descriptions);
  }
  if (const auto* n = root.get("overrides")) {
    if (!n->is_array()) r.errors.push_back("overrides: expected an array of strings");
  }

  // Cross-field validation.
  const auto& e = c.engine;
  r.check(e.population_size >= 1, "engine.population_size: must be at least 1");
  r.check(e.budget >= e.population_size,
          fmt::format("engine.budget: must be at least population_size ({} < {})", e.budget,
                      e.population_size));
  r.check(e.k_offspring >= 1, "engine.k_offspring: must be at least 1");
  r.check(e.p_exp >= 0.0 && e.p_exp <= 1.0,
          fmt::format("engine.p_exp: must be within [0, 1] (got {})", e.p_exp));
  r.check(e.p_crossover >= 0.0 && e.p_crossover <= 1.0,
          fmt::format("engine.p_crossover: must be within [0, 1] (got {})", e.p_crossover));
  r.check(e.p_mutation >= 0.0 && e.p_mutation <= 1.0,
          fmt::format("engine.p_mutation: must be within [0, 1] (got {})", e.p_mutation));
  r.check(e.p_crossover + e.p_mutation > 0.0 && e.p_crossover + e.p_mutation <= 1.0 + 1e-12,
          fmt::format("engine.p_mutation: p_crossover + p_mutation must lie in (0, 1] (got {})",
                      e.p_crossover + e.p_mutation));
  r.check(e.feedback_chars >= 16, "engine.feedback_chars: must be at least 16");
  r.check(e.hv_mc_samples >= 1000, "engine.hv_mc_samples: must be at least 1000");

  const auto& x = c.experience;
  r.check(x.word_cap >= 1, "experience.word_cap: must be at least 1");
  r.check(x.good_count >= 1 || !x.enabled, "experience.good_count: must be at least 1");

  const auto& b = c.backend;
  r.check(b.kind == "mock" || b.kind == "remote",
          fmt::format("backend.kind: '{}' is not one of mock, remote", b.kind));
  r.check(b.parallelism >= 1, "backend.parallelism: must be at least 1");
  r.check(b.price_input >= 0.0, "backend.price_input: must be non-negative");
  r.check(b.price_output >= 0.0, "backend.price_output: must be non-negative");
  r.check(b.mock.invalid_rate >= 0.0 && b.mock.invalid_rate <= 1.0,
          "backend.mock.invalid_rate: must be within [0, 1]");
  r.check(b.mock.failure_rate >= 0.0 && b.mock.failure_rate <= 1.0,
          "backend.mock.failure_rate: must be within [0, 1]");
  r.check(b.remote.retry.attempts >= 1, "backend.retry.attempts: must be at least 1");
  r.check(b.remote.retry.multiplier >= 1.0, "backend.retry.multiplier: must be at least 1");
  if (b.kind == "remote") {
    r.check(!b.remote.base_url.empty(), "backend.remote.base_url: required for the remote backend");
    r.check(!b.remote.model.empty(), "backend.remote.model: required for the remote backend");
    r.check(b.remote.temperature >= 0.0, "backend.remote.temperature: must be non-negative");
  }

  const auto& p = c.problem;
  if (p.kind == "circle_packing") {
    r.check(p.circles.circles >= 1, "problem.circle_packing.circles: must be at least 1");
    r.check(p.circles.repair_options.iterations >= 1,
            "problem.circle_packing.repair_iterations: must be at least 1");
    r.check(p.circles.seed_radius_lo > 0.0 && p.circles.seed_radius_lo <= p.circles.seed_radius_hi,
            "problem.circle_packing.seed_radius_lo: need 0 < lo <= hi");
  } else if (p.kind == "synthetic") {
    r.check(p.synthetic.objectives >= 2, "problem.synthetic.objectives: must be at least 2");
    r.check(p.synthetic.dims + 1 >= p.synthetic.objectives,
            "problem.synthetic.dims: must be at least objectives - 1");
    r.check(p.synthetic.shape > 0.0, "problem.synthetic.shape: must be positive");
  } else if (p.kind == "text_toy") {
    r.check(!p.text.target.empty(), "problem.text_toy.target: must be non-empty");
    r.check(!p.text.alphabet.empty(), "problem.text_toy.alphabet: must be non-empty");
    for (char ch : p.text.target) {
      if (p.text.alphabet.find(ch) == std::string::npos) {
        r.errors.push_back("problem.text_toy.target: uses characters outside the alphabet");
        break;
      }
    }
  } else if (p.kind == "external") {
    r.check(!p.external.command.empty(), "problem.external.command: required for external problems");
    r.check(p.external.workers >= 1, "problem.external.workers: must be at least 1");
    r.check(p.external.handshake_timeout_s > 0.0,
            "problem.external.handshake_timeout_s: must be positive");
    r.check(p.external.request_timeout_s > 0.0,
            "problem.external.request_timeout_s: must be positive");
    r.check(!e.seeds_file.empty(), "engine.seeds_file: external problems need initial candidates");
  } else {
    r.errors.push_back(fmt::format(
        "problem.kind: '{}' is not one of circle_packing, synthetic, text_toy, external", p.kind));
  }

  if (!r.errors.empty()) throw ConfigError(r.errors);
  return c;
}

}  // namespace

RunConfig parse_config(std::string_view toml_text, const std::vector<std::string>& overrides) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    const auto& src = e.source();
    throw ConfigError(fmt::format("config: TOML syntax error at line {}, column {}: {}",
                                  src.begin.line, src.begin.column, e.description()));
  }
  std::vector<std::string> errors;
  for (const auto& o : overrides) apply_override(root, o, errors);
  if (!errors.empty()) throw ConfigError(errors);

  // Overrides already recorded in a snapshot are kept ahead of new ones.
  std::vector<std::string> history;
  if (const auto* arr = root["overrides"].as_array()) {
    for (const auto& e : *arr) {
      if (auto s = e.value<std::string>()) history.push_back(*s);
    }
  }
  history.insert(history.end(), overrides.begin(), overrides.end());
  return from_table(root, std::move(history));
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot read {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string to_toml(const RunConfig& c) {
  const auto u = [](std::size_t v) { return static_cast<std::int64_t>(v); };
  toml::table root;

  const auto& e = c.engine;
  root.insert("engine", toml::table{
                            {"population_size", u(e.population_size)},
                            {"budget", u(e.budget)},
                            {"k_offspring", u(e.k_offspring)},
                            {"p_exp", e.p_exp},
                            {"p_crossover", e.p_crossover},
                            {"p_mutation", e.p_mutation},
                            {"calls_per_generation", u(e.calls_per_generation)},
                            {"seed", static_cast<std::int64_t>(e.seed)},
                            {"selector", std::string(to_string(e.selector))},
                            {"generation_cap", u(e.generation_cap)},
                            {"initial_size", u(e.initial_size)},
                            {"seeds_file", e.seeds_file},
                            {"feedback_chars", u(e.feedback_chars)},
                            {"hv_mc_samples", static_cast<std::int64_t>(e.hv_mc_samples)},
                        });

  const auto& x = c.experience;
  root.insert("experience", toml::table{{"enabled", x.enabled},
                                        {"good_count", u(x.good_count)},
                                        {"bad_count", u(x.bad_count)},
                                        {"word_cap", u(x.word_cap)},
                                        {"prior_memo", x.prior_memo}});

  const auto& b = c.backend;
  root.insert(
      "backend",
      toml::table{
          {"kind", b.kind},
          {"parallelism", u(b.parallelism)},
          {"price_input", b.price_input},
          {"price_output", b.price_output},
          {"mock", toml::table{{"invalid_rate", b.mock.invalid_rate},
                               {"failure_rate", b.mock.failure_rate},
                               {"fail_summarizer", b.mock.fail_summarizer}}},
          {"remote", toml::table{{"base_url", b.remote.base_url},
                                 {"model", b.remote.model},
                                 {"temperature", b.remote.temperature},
                                 {"max_tokens", u(b.remote.max_tokens)},
                                 {"api_key_env", b.remote.api_key_env},
                                 {"timeout_s", static_cast<std::int64_t>(b.remote.timeout.count())}}},
          {"retry", toml::table{{"attempts", u(b.remote.retry.attempts)},
                                {"base_delay_ms",
                                 static_cast<std::int64_t>(b.remote.retry.base_delay.count())},
                                {"max_delay_ms",
                                 static_cast<std::int64_t>(b.remote.retry.max_delay.count())},
                                {"multiplier", b.remote.retry.multiplier}}},
      });

  const auto& p = c.problem;
  toml::table weights;
  for (const auto& [name, w] : p.weights) weights.insert(name, w);
  toml::array command;
  for (const auto& s : p.external.command) command.push_back(s);
  toml::array promote;
  for (const auto& s : p.external.promote) promote.push_back(s);
  toml::table descriptions;
  for (const auto& d : p.external.task.objective_descriptions) descriptions.insert(d.name, d.prose);
  root.insert(
      "problem",
      toml::table{
          {"kind", p.kind},
          {"weights", weights},
          {"circle_packing",
           toml::table{{"circles", u(p.circles.circles)},
                       {"repair", p.circles.repair},
                       {"promote_constraints", p.circles.promote_constraints},
                       {"repair_iterations", u(p.circles.repair_options.iterations)},
                       {"seed_radius_lo", p.circles.seed_radius_lo},
                       {"seed_radius_hi", p.circles.seed_radius_hi}}},
          {"synthetic", toml::table{{"dims", u(p.synthetic.dims)},
                                    {"objectives", u(p.synthetic.objectives)},
                                    {"shape", p.synthetic.shape},
                                    {"mutation_sigma", p.synthetic.mutation_sigma}}},
          {"text_toy", toml::table{{"target", p.text.target}, {"alphabet", p.text.alphabet}}},
          {"external",
           toml::table{{"command", command},
                       {"workers", u(p.external.workers)},
                       {"handshake_timeout_s", p.external.handshake_timeout_s},
                       {"request_timeout_s", p.external.request_timeout_s},
                       {"max_restarts", u(p.external.max_restarts)},
                       {"promote", promote},
                       {"task_description", p.external.task.task_description},
                       {"output_format", p.external.task.output_format},
                       {"mutation_instruction", p.external.task.mutation_instruction},
                       {"crossover_instruction", p.external.task.crossover_instruction},
                       {"additional_requirements", p.external.task.additional_requirements},
                       {"objective_descriptions", descriptions}}},
      });

  toml::array overrides;
  for (const auto& o : c.overrides) overrides.push_back(o);
  root.insert("overrides", overrides);

  std::stringstream out;
  out << root << "\n";
  return out.str();
}

}  // namespace llmevo
