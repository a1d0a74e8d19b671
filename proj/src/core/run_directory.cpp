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

#include <chrono>
#include <fstream>
#include <optional>
#include <system_error>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "llmevo/core/errors.hpp"
#include "llmevo/core/run.hpp"

namespace llmevo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

json population_json(const std::vector<Candidate>& population, const FeedbackAdapter& adapter) {
  json out = json::array();
  for (const auto& c : population) {
    out.push_back({{"id", c.id},
                   {"text", c.text},
                   {"key", c.canonical_key},
                   {"generation", c.generation},
                   {"parents", c.parents},
                   {"raw", c.eval->raw},
                   {"normalized", c.eval->normalized},
                   {"fitness", c.eval->fitness},
                   {"feedback", adapter.feedback(*c.eval)}});
  }
  return out;
}

json cost_json(const CostSummary& c) {
  return {{"optimizer_calls", c.optimizer_calls},
          {"summarizer_calls", c.summarizer_calls},
          {"failed_calls", c.failed_calls},
          {"input_tokens", c.input_tokens},
          {"output_tokens", c.output_tokens},
          {"price_usd", c.price_usd}};
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FatalError(fmt::format("cannot write {}", path.string()));
  return out;
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    auto out = open_out(tmp);
    out << content;
    out.flush();
    if (!out) throw FatalError(fmt::format("cannot write {}", tmp.string()));
  }
  fs::rename(tmp, path);
}

RunOutcome execute_run(const RunConfig& config, const fs::path& run_dir, const RunOptions& options,
                       std::unique_ptr<Problem> problem, std::unique_ptr<llm::Backend> backend) {
  std::error_code ec;
  fs::create_directories(run_dir, ec);
  if (ec) throw FatalError(fmt::format("cannot create {}: {}", run_dir.string(), ec.message()));
  fs::remove(run_dir / "FAILED", ec);
  fs::remove(run_dir / "manifest.json", ec);

  RunOutcome outcome;
  outcome.directory = run_dir;
  const std::string started = utc_now();

  write_file_atomic(run_dir / "config.snapshot.toml", to_toml(config));
  auto events_out = open_out(run_dir / "events.jsonl");
  auto metrics_out = open_out(run_dir / "metrics.csv");
  auto history_out = open_out(run_dir / "experience.history.jsonl");
  metrics_out << metrics::csv_header() << '\n';
  metrics_out.flush();

  json last_snapshot;
  EventLog log(&events_out);
  log.set_listener([&](const json& ev) {
    const auto& type = ev.at("event");
    if (type == "generation_end") {
      const auto& s = ev.at("snapshot");
      last_snapshot = s;
      const auto snap = snapshot_from_json(s);
      metrics_out << metrics::to_csv_row(snap) << '\n';
      metrics_out.flush();
      events_out.flush();
    } else if (type == "experience") {
      history_out << json{{"generation", ev.at("generation")},
                          {"version", ev.at("version")},
                          {"memo", ev.at("memo")},
                          {"evidence", ev.at("evidence")},
                          {"skipped", ev.at("skipped")}}
                         .dump()
                  << '\n';
      history_out.flush();
    }
  });

  std::unique_ptr<Engine> engine;
  std::unique_ptr<RunState> state;
  const auto fail = [&](const std::string& message) {
    log.emit("run_failed", {{"error", message}});
    events_out.flush();
    write_file_atomic(run_dir / "FAILED", message + "\n");
    json manifest{{"run_id", run_dir.filename().string()},
                  {"status", "failed"},
                  {"error", message},
                  {"config_snapshot", "config.snapshot.toml"},
                  {"problem", config.problem.kind},
                  {"backend", config.backend.kind},
                  {"started_at", started},
                  {"finished_at", utc_now()},
                  {"generations", state ? state->generation : 0},
                  {"cost", cost_json(state ? state->cost : CostSummary{})}};
    write_file_atomic(run_dir / "manifest.json", manifest.dump(2) + "\n");
    outcome.failed = true;
    outcome.error = message;
  };

  try {
    if (!problem) problem = make_problem(config);
    if (!backend) backend = make_backend(config, *problem);
    engine = std::make_unique<Engine>(config, *problem, *backend, log);
    state = engine->initialize_run(load_seeds(config, *problem));

    std::size_t idle = 0;
    while (true) {
      outcome.stop = engine->should_stop(*state);
      if (outcome.stop.stop) break;
      const std::size_t before = state->ledger.consumed();
      const auto report = engine->run_generation(*state);
      if (options.progress) options.progress(report);
      idle = state->ledger.consumed() == before ? idle + 1 : 0;
      if (options.stall_generations > 0 && idle >= options.stall_generations) {
        outcome.stop = {true, "stalled"};
        break;
      }
    }
    log.emit("run_end", {{"reason", outcome.stop.reason},
                         {"generations", state->generation},
                         {"consumed", state->ledger.consumed()}});
  } catch (const ConfigError& e) {
    fail(e.what());
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
    return outcome;
  }

  events_out.flush();
  outcome.generations = state->generation;
  outcome.final_snapshot = state->snapshots.back();
  outcome.cost = state->cost;

  write_file_atomic(run_dir / "population.final.json",
                    population_json(state->population, state->adapter).dump(2) + "\n");

  json manifest{{"run_id", run_dir.filename().string()},
                {"status", "complete"},
                {"config_snapshot", "config.snapshot.toml"},
                {"problem", std::string(problem->name())},
                {"backend", std::string(backend->name())},
                {"started_at", started},
                {"finished_at", utc_now()},
                {"stop_reason", outcome.stop.reason},
                {"generations", outcome.generations},
                {"final", last_snapshot},
                {"cost", cost_json(outcome.cost)}};
  write_file_atomic(run_dir / "manifest.json", manifest.dump(2) + "\n");
  return outcome;
}

}  // namespace llmevo
