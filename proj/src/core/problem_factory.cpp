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

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "llmevo/core/errors.hpp"
#include "llmevo/core/run.hpp"
#include "llmevo/problems/external.hpp"

namespace llmevo {

std::unique_ptr<Problem> make_problem(const RunConfig& config) {
  const auto& p = config.problem;
  if (p.kind == "circle_packing") return make_circle_packing(p.circles);
  if (p.kind == "synthetic") return make_synthetic(p.synthetic);
  if (p.kind == "text_toy") return make_text_toy(p.text);
  if (p.kind == "external") {
    ExternalProblemOptions o;
    o.command = p.external.command;
    o.workers = p.external.workers;
    o.worker.handshake_timeout =
        std::chrono::milliseconds(static_cast<long long>(p.external.handshake_timeout_s * 1000));
    o.worker.request_timeout =
        std::chrono::milliseconds(static_cast<long long>(p.external.request_timeout_s * 1000));
    o.worker.max_restarts = p.external.max_restarts;
    o.task = p.external.task;
    o.promote = p.external.promote;
    return make_external(std::move(o));
  }
  throw ConfigError(fmt::format("problem.kind: unknown problem '{}'", p.kind));
}

std::unique_ptr<llm::Backend> make_backend(const RunConfig& config, const Problem& problem) {
  if (config.backend.kind == "remote") {
    return std::make_unique<llm::RemoteBackend>(config.backend.remote);
  }
  auto options = config.backend.mock;
  options.seed = RngStreams(config.engine.seed).seed_of(Stream::mock_backend);
  return std::make_unique<llm::MockBackend>(
      options, [&problem](std::span<const std::string> parents, JobKind kind, Rng& rng) {
        return problem.mock_variation(parents, kind, rng);
      });
}

std::vector<std::string> load_seeds(const RunConfig& config, const Problem& problem) {
  const auto& file = config.engine.seeds_file;
  if (file.empty()) {
    RngStreams streams(config.engine.seed);
    return problem.random_seeds(config.engine.effective_initial_size(), streams[Stream::seeds]);
  }
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("engine.seeds_file: cannot read '{}'", file));
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  std::vector<std::string> seeds;
  if (file.ends_with(".json")) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array()) {
      throw ConfigError(fmt::format("engine.seeds_file: '{}' is not a JSON array", file));
    }
    for (const auto& e : j) {
      if (!e.is_string()) {
        throw ConfigError(fmt::format("engine.seeds_file: '{}' must hold strings only", file));
      }
      seeds.push_back(e.get<std::string>());
    }
    return seeds;
  }

  const bool blocks = text.find("\n---") != std::string::npos || text.starts_with("---");
  std::istringstream lines(text);
  std::string block;
  for (std::string line; std::getline(lines, line);) {
    if (blocks) {
      if (line == "---") {
        if (block.find_first_not_of(" \t\r\n") != std::string::npos) seeds.push_back(block);
        block.clear();
      } else {
        block += line + "\n";
      }
    } else if (line.find_first_not_of(" \t\r") != std::string::npos) {
      seeds.push_back(line);
    }
  }
  if (blocks && block.find_first_not_of(" \t\r\n") != std::string::npos) seeds.push_back(block);
  return seeds;
}

}  // namespace llmevo
