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

#include "llmevo/core/engine.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "llmevo/core/errors.hpp"
#include "llmevo/llm/prompt.hpp"
#include "llmevo/selection/selection.hpp"

namespace llmevo {

using nlohmann::json;

namespace {

json usage_json(const llm::TokenUsage& u) {
  json j = json::object();
  if (u.input_tokens) j["input_tokens"] = *u.input_tokens;
  if (u.output_tokens) j["output_tokens"] = *u.output_tokens;
  return j;
}

json counts_json(const GenerationCounts& c) {
  return json{{"jobs", c.jobs},
              {"failed_calls", c.failed_calls},
              {"proposed", c.proposed},
              {"decodable", c.decodable},
              {"duplicates", c.duplicates},
              {"novel", c.novel},
              {"valid", c.valid},
              {"over_budget", c.over_budget},
              {"evaluator_failures", c.evaluator_failures},
              {"consumed", c.consumed}};
}

const Candidate* find_member(const std::vector<Candidate>& population, CandidateId id) {
  for (const auto& c : population) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<SelectionEntry> selection_entries(const std::vector<Candidate>& pool) {
  std::vector<SelectionEntry> entries;
  entries.reserve(pool.size());
  for (const auto& c : pool) entries.push_back({c.id, c.fitness(), c.eval->normalized});
  return entries;
}

}  // namespace

FeedbackAdapter make_adapter(const Problem& problem,
                             const std::vector<std::pair<std::string, double>>& weights) {
  auto specs = problem.objective_specs();
  auto constraints = problem.constraint_specs();
  std::vector<std::string> errors;
  for (const auto& [name, w] : weights) {
    auto it = std::find_if(specs.begin(), specs.end(), [&](const auto& s) { return s.name == name; });
    if (it == specs.end()) {
      errors.push_back(fmt::format("problem.weights.{}: no such objective", name));
    } else if (w < 0.0) {
      errors.push_back(fmt::format("problem.weights.{}: must be non-negative", name));
    } else {
      it->weight = w;
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  return FeedbackAdapter(std::move(specs), std::move(constraints));
}

RunState::RunState(const RunConfig& config)
    : ledger(config.engine.budget), streams(config.engine.seed) {}

Engine::Engine(RunConfig config, const Problem& problem, llm::Backend& backend, EventLog& log)
    : config_(std::move(config)), problem_(problem), backend_(backend), log_(log) {}

std::unique_ptr<RunState> Engine::initialize_run(const std::vector<std::string>& seeds) {
  auto state = std::make_unique<RunState>(config_);
  state->adapter = make_adapter(problem_, config_.problem.weights);
  specs_ = state->adapter.objectives();
  problem_.task_template().validate(specs_);
  if (!config_.experience.prior_memo.empty()) {
    state->experience.memo =
        truncate_words(config_.experience.prior_memo, config_.experience.word_cap);
  }

  json spec_list = json::array();
  for (const auto& s : specs_) {
    json o{{"name", s.name},
           {"direction", std::string(to_string(s.direction))},
           {"weight", s.weight},
           {"source", s.source == ObjectiveSource::native ? "native" : "promoted_constraint"}};
    if (s.bounds) o["bounds"] = {s.bounds->lo, s.bounds->hi};
    spec_list.push_back(o);
  }
  log_.emit("run_start", {{"problem", std::string(problem_.name())},
                          {"backend", std::string(backend_.name())},
                          {"seed", config_.engine.seed},
                          {"budget", config_.engine.budget},
                          {"population_size", config_.engine.population_size},
                          {"k_offspring", config_.engine.k_offspring},
                          {"calls_per_generation", config_.engine.effective_calls()},
                          {"selector", std::string(to_string(config_.engine.selector))},
                          {"objectives", spec_list},
                          {"seed_count", seeds.size()}});

  std::unordered_set<std::string> keys;
  for (const auto& s : seeds) {
    auto decoded = problem_.decode(s);
    if (decoded.payload) keys.insert(problem_.canonical_key(*decoded.payload));
  }
  if (keys.empty()) throw ConfigError("seeds: none of the initial candidates decodes");
  if (keys.size() > config_.engine.budget) {
    throw ConfigError(fmt::format(
        "engine.budget: {} is smaller than the {} distinct decodable seeds", config_.engine.budget,
        keys.size()));
  }

  std::vector<Proposed> proposed;
  for (const auto& s : seeds) proposed.push_back({s, {}, std::nullopt});
  GenerationCounts counts;
  auto evaluated = evaluate_proposals(*state, std::move(proposed), 0, counts);
  renormalize(*state);

  std::vector<Candidate> pool = std::move(evaluated);
  if (pool.empty()) throw FatalError("no initial candidate evaluated valid");
  for (auto& c : pool) state->adapter.renormalize(*c.eval);

  const auto entries = selection_entries(pool);
  const auto sel = select_survivors(entries, config_.engine.population_size,
                                    config_.engine.selector, state->streams[Stream::selection]);
  for (std::size_t idx : sel.chosen) state->population.push_back(pool[idx]);

  json chosen = json::array();
  for (const auto& c : state->population) chosen.push_back(c.id);
  log_.emit("selection", {{"generation", 0},
                          {"pool", pool.size()},
                          {"chosen", chosen},
                          {"by_fitness", sel.by_fitness},
                          {"by_pareto", sel.by_pareto}});

  auto snap = snapshot(*state);
  state->snapshots.push_back(snap);
  counts.consumed = state->ledger.consumed();
  log_.emit("generation_end", {{"generation", 0},
                               {"counts", counts_json(counts)},
                               {"snapshot", snapshot_to_json(snap)},
                               {"memo_version", state->experience.version}});
  return state;
}

std::vector<VariationJob> Engine::pair_parents(RunState& state) const {
  if (state.population.empty()) throw std::logic_error("pair_parents: empty population");
  auto& rng = state.streams[Stream::pairing];
  const double pc = config_.engine.p_crossover;
  const double pm = config_.engine.p_mutation;
  const std::size_t n = state.population.size();
  std::vector<VariationJob> jobs;
  for (std::size_t j = 0; j < config_.engine.effective_calls(); ++j) {
    VariationJob job;
    job.index = j;
    bool crossover = false;
    while (true) {
      const double u = rng.uniform01();
      if (u < pc) {
        crossover = true;
        break;
      }
      if (u < pc + pm) break;
    }
    if (crossover && n < 2) {
      crossover = false;
      job.downgraded = true;
    }
    if (crossover) {
      const auto a = rng.below(n);
      auto b = rng.below(n - 1);
      if (b >= a) ++b;
      job.kind = JobKind::crossover;
      job.parents = {state.population[a].id, state.population[b].id};
    } else {
      job.kind = JobKind::mutation;
      job.parents = {state.population[rng.below(n)].id};
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

std::vector<Candidate> Engine::evaluate_proposals(RunState& state, std::vector<Proposed> proposed,
                                                  std::size_t generation,
                                                  GenerationCounts& counts) {
  enum class Status { undecodable, pending, duplicate, over_budget };
  struct Item {
    Candidate cand;
    Status status = Status::undecodable;
    std::string reason;
    std::optional<std::size_t> job;
  };

  std::vector<Item> items;
  std::vector<std::size_t> to_eval;
  for (auto& p : proposed) {
    Item item;
    item.cand.id = state.next_id++;
    item.cand.text = std::move(p.text);
    item.cand.generation = generation;
    item.cand.parents = std::move(p.parents);
    item.job = p.job;
    ++counts.proposed;
    auto decoded = problem_.decode(item.cand.text);
    if (!decoded.payload) {
      item.reason = decoded.error;
      state.proposals.push_back({item.cand.text, false});
    } else {
      ++counts.decodable;
      item.cand.canonical_key = problem_.canonical_key(*decoded.payload);
      item.cand.payload = std::move(decoded.payload);
      state.proposals.push_back({item.cand.canonical_key, true});
      switch (state.ledger.admit(item.cand.canonical_key)) {
        case Admission::cached:
          item.status = Status::duplicate;
          ++counts.duplicates;
          break;
        case Admission::admitted:
          item.status = Status::pending;
          to_eval.push_back(items.size());
          ++counts.novel;
          break;
        case Admission::exhausted:
          item.status = Status::over_budget;
          ++counts.over_budget;
          break;
      }
    }
    items.push_back(std::move(item));
  }

  std::vector<const Payload*> batch;
  batch.reserve(to_eval.size());
  for (std::size_t i : to_eval) batch.push_back(&*items[i].cand.payload);
  auto results = problem_.evaluate_batch(batch);

  std::unordered_set<std::size_t> failed;
  for (std::size_t b = 0; b < to_eval.size(); ++b) {
    auto& item = items[to_eval[b]];
    auto& pe = results[b];
    if (pe.failed) {
      state.ledger.release(item.cand.canonical_key);
      item.reason = pe.raw.invalid_reason;
      failed.insert(to_eval[b]);
      ++counts.evaluator_failures;
      continue;
    }
    EvaluationResult result = state.adapter.complete(pe.raw);
    if (pe.scored) {
      item.cand.text = problem_.encode(*pe.scored);
      item.cand.payload = std::move(pe.scored);
    }
    state.ledger.commit(item.cand.canonical_key, result);
    state.call_trace.push_back(result.valid ? result.fitness : 0.0);
    item.cand.eval = std::move(result);
  }

  std::vector<Candidate> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& item = items[i];
    auto& c = item.cand;
    json ev{{"id", c.id},
            {"generation", generation},
            {"parents", c.parents},
            {"text_hash", text_hash(c.text)}};
    if (item.job) ev["job"] = *item.job;
    std::string status;
    switch (item.status) {
      case Status::undecodable:
        status = "undecodable";
        ev["reason"] = item.reason;
        break;
      case Status::over_budget:
        status = "over_budget";
        break;
      case Status::duplicate: {
        status = "duplicate";
        if (auto cached = state.ledger.lookup(c.canonical_key)) {
          c.eval = std::move(*cached);
        } else {
          ev["reason"] = "original evaluation failed";
        }
        break;
      }
      case Status::pending:
        status = failed.contains(i) ? "evaluator_failure" : "evaluated";
        if (failed.contains(i)) ev["reason"] = item.reason;
        break;
    }
    ev["status"] = status;
    if (!c.canonical_key.empty()) ev["key"] = c.canonical_key;
    if (c.eval) {
      ev["valid"] = c.eval->valid;
      ev["raw"] = c.eval->raw;
      if (c.eval->valid) {
        ev["normalized"] = c.eval->normalized;
        ev["fitness"] = c.eval->fitness;
        if (item.status == Status::pending) ++counts.valid;
      } else {
        ev["reason"] = c.eval->invalid_reason;
      }
    }
    log_.emit("candidate", ev);
    if (item.status == Status::pending && c.evaluated_valid()) {
      state.archive.push_back(c);
      out.push_back(std::move(c));
    }
  }
  return out;
}

void Engine::renormalize(RunState& state) const {
  if (!state.adapter.needs_running_stats()) return;
  for (auto& c : state.population) state.adapter.renormalize(*c.eval);
  for (auto& c : state.archive) state.adapter.renormalize(*c.eval);
}

void Engine::account(RunState& state, const llm::BackendReply& reply,
                     const llm::BackendRequest& request, bool summarizer) {
  auto& cost = state.cost;
  (summarizer ? cost.summarizer_calls : cost.optimizer_calls) += 1;
  const auto in = reply.usage.input_tokens.value_or(
      llm::estimate_tokens(request.system) + llm::estimate_tokens(request.user));
  const auto out = reply.usage.output_tokens.value_or(llm::estimate_tokens(reply.raw_text));
  cost.input_tokens += in;
  cost.output_tokens += out;
  cost.price_usd = static_cast<double>(cost.input_tokens) / 1e6 * config_.backend.price_input +
                   static_cast<double>(cost.output_tokens) / 1e6 * config_.backend.price_output;
}

GenerationReport Engine::run_generation(RunState& state) {
  if (state.ledger.exhausted()) throw std::logic_error("run_generation: budget exhausted");
  GenerationReport report;
  report.generation = state.generation + 1;
  const std::size_t gen = report.generation;
  auto& counts = report.counts;

  report.jobs = pair_parents(state);
  counts.jobs = report.jobs.size();
  json job_list = json::array();
  for (const auto& j : report.jobs) {
    job_list.push_back({{"index", j.index},
                        {"kind", std::string(to_string(j.kind))},
                        {"parents", j.parents},
                        {"downgraded", j.downgraded}});
  }
  log_.emit("generation_start", {{"generation", gen}, {"jobs", job_list}});

  const FeedbackOptions fb{config_.engine.feedback_chars};
  const auto& tmpl = problem_.task_template();
  std::vector<llm::BackendRequest> requests;
  std::vector<bool> injected;
  for (const auto& job : report.jobs) {
    std::vector<llm::ParentContext> parents;
    for (auto id : job.parents) {
      const auto* member = find_member(state.population, id);
      parents.push_back({id, member->text, state.adapter.feedback(*member->eval, fb)});
    }
    auto memo = maybe_inject(state.experience, config_.engine.p_exp,
                             state.streams[Stream::injection]);
    if (!config_.experience.enabled) memo.reset();
    injected.push_back(memo.has_value());
    auto bundle = llm::build_prompt(tmpl, specs_, job.kind, parents, std::move(memo),
                                    config_.engine.k_offspring);
    llm::BackendRequest req;
    req.role = llm::BackendRole::optimizer;
    req.system = bundle.system_preamble;
    req.user = bundle.body;
    req.job_index = job.index;
    req.kind = job.kind;
    req.k = config_.engine.k_offspring;
    for (const auto& p : parents) req.parent_texts.push_back(p.text);
    requests.push_back(std::move(req));
  }

  const auto outcomes = llm::dispatch(backend_, requests, config_.backend.parallelism);

  std::vector<Proposed> proposed;
  for (std::size_t j = 0; j < outcomes.size(); ++j) {
    const auto& oc = outcomes[j];
    const auto& req = requests[j];
    json ev{{"generation", gen},
            {"job", j},
            {"role", "optimizer"},
            {"prompt_hash", text_hash(req.system + "\n" + req.user)},
            {"system", req.system},
            {"prompt", req.user},
            {"injected", static_cast<bool>(injected[j])},
            {"attempts", oc.attempts}};
    if (!oc.reply) {
      ++counts.failed_calls;
      ++state.cost.failed_calls;
      ev["error"] = oc.error;
      log_.emit("backend_call", ev);
      continue;
    }
    account(state, *oc.reply, req, false);
    const auto parsed = llm::parse_candidates(oc.reply->raw_text, config_.engine.k_offspring);
    ev["reply"] = oc.reply->raw_text;
    ev["usage"] = usage_json(oc.reply->usage);
    ev["latency_ms"] = oc.reply->latency_ms;
    ev["parsed"] = parsed.candidates.size();
    ev["diagnostics"] = parsed.diagnostics;
    log_.emit("backend_call", ev);
    for (const auto& text : parsed.candidates) {
      proposed.push_back({text, report.jobs[j].parents, j});
    }
  }
  if (counts.failed_calls == outcomes.size() && !outcomes.empty()) {
    report.warning = "all backend calls failed; population carried over";
  }

  auto offspring = evaluate_proposals(state, std::move(proposed), gen, counts);
  renormalize(state);

  std::vector<Candidate> pool = state.population;
  std::unordered_set<std::string> keys;
  for (const auto& c : pool) keys.insert(c.canonical_key);
  std::size_t added = 0;
  for (auto& c : offspring) {
    if (keys.insert(c.canonical_key).second) {
      state.adapter.renormalize(*c.eval);
      pool.push_back(std::move(c));
      ++added;
    }
  }

  if (added > 0) {
    const auto entries = selection_entries(pool);
    const auto sel = select_survivors(entries, config_.engine.population_size,
                                      config_.engine.selector, state.streams[Stream::selection]);
    std::vector<Candidate> next;
    for (std::size_t idx : sel.chosen) next.push_back(pool[idx]);
    state.population = std::move(next);
    json chosen = json::array();
    for (const auto& c : state.population) chosen.push_back(c.id);
    log_.emit("selection", {{"generation", gen},
                            {"pool", pool.size()},
                            {"chosen", chosen},
                            {"by_fitness", sel.by_fitness},
                            {"by_pareto", sel.by_pareto}});
  } else {
    log_.emit("selection", {{"generation", gen}, {"pool", pool.size()}, {"carried_over", true}});
  }
  if (!report.warning.empty()) log_.emit("warning", {{"generation", gen}, {"message", report.warning}});

  if (config_.experience.enabled && !state.archive.empty()) {
    std::vector<const Candidate*> history;
    for (const auto& c : state.archive) history.push_back(&c);
    const auto evidence =
        build_evidence(history, specs_,
                       {config_.experience.good_count, config_.experience.bad_count},
                       state.streams[Stream::evidence]);
    auto upd = update_experience(state.experience, evidence, backend_, config_.experience.word_cap);
    json call{{"generation", gen},
              {"role", "summarizer"},
              {"prompt_hash", text_hash(upd.request.system + "\n" + upd.request.user)},
              {"system", upd.request.system},
              {"prompt", upd.request.user}};
    if (upd.reply) {
      account(state, *upd.reply, upd.request, true);
      call["reply"] = upd.reply->raw_text;
      call["usage"] = usage_json(upd.reply->usage);
      call["latency_ms"] = upd.reply->latency_ms;
      call["attempts"] = upd.reply->attempts;
    } else {
      ++state.cost.failed_calls;
      call["error"] = upd.error;
    }
    log_.emit("backend_call", call);
    state.experience = std::move(upd.experience);
    report.experience_skipped = upd.skipped;
    log_.emit("experience", {{"generation", gen},
                             {"version", state.experience.version},
                             {"memo", state.experience.memo},
                             {"evidence", evidence.ids()},
                             {"skipped", upd.skipped}});
  }
  report.memo_version = state.experience.version;

  state.generation = gen;
  counts.consumed = state.ledger.consumed();
  report.snapshot = snapshot(state);
  state.snapshots.push_back(report.snapshot);
  log_.emit("generation_end", {{"generation", gen},
                               {"counts", counts_json(counts)},
                               {"snapshot", snapshot_to_json(report.snapshot)},
                               {"memo_version", report.memo_version}});
  return report;
}

StopDecision Engine::should_stop(const RunState& state) const {
  if (state.ledger.consumed() >= config_.engine.budget) return {true, "budget"};
  if (config_.engine.generation_cap > 0 && state.generation >= config_.engine.generation_cap) {
    return {true, "generation_cap"};
  }
  return {};
}

metrics::MetricSnapshot Engine::snapshot(const RunState& state) const {
  metrics::MetricSnapshot s;
  s.generation = state.generation;
  s.consumed = state.ledger.consumed();

  std::vector<metrics::KeyedFitness> keyed;
  keyed.reserve(state.archive.size());
  for (const auto& c : state.archive) keyed.push_back({c.canonical_key, c.fitness()});
  s.top1_f = metrics::top_k_mean(keyed, 1);
  s.top10_f = metrics::top_k_mean(keyed, 10);
  s.auc_top10 = metrics::auc_top_k(state.call_trace, 10, config_.engine.budget);

  std::vector<std::vector<double>> front;
  for (const auto& c : state.population) front.push_back(c.eval->normalized);
  metrics::HypervolumeOptions hv;
  hv.mc_samples = config_.engine.hv_mc_samples;
  hv.mc_seed = state.streams.seed_of(Stream::metrics);
  s.hypervolume = metrics::hypervolume(front, hv);

  std::vector<std::size_t> order(state.archive.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return state.archive[a].fitness() > state.archive[b].fitness();
  });
  order.resize(std::min<std::size_t>(order.size(), 100));
  const auto distance = [&](std::size_t i, std::size_t j) {
    return problem_.distance(*state.archive[order[i]].payload, *state.archive[order[j]].payload);
  };
  const auto stats = metrics::population_stats(state.proposals, order.size(), distance);
  s.uniqueness = stats.uniqueness;
  s.validity = stats.validity;
  s.diversity = stats.diversity;
  return s;
}

}  // namespace llmevo
