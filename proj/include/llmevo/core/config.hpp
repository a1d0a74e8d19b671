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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llmevo/llm/backend.hpp"
#include "llmevo/llm/prompt.hpp"
#include "llmevo/problems/problem.hpp"
#include "llmevo/selection/selection.hpp"

namespace llmevo {

struct EngineConfig {
  std::size_t population_size = 50;
  std::size_t budget = 5000;
  std::size_t k_offspring = 2;
  double p_exp = 0.5;
  double p_crossover = 0.8;
  double p_mutation = 0.2;
  /// 0 means ceil(population_size / k_offspring).
  std::size_t calls_per_generation = 0;
  std::uint64_t seed = 0;
  SelectorMode selector = SelectorMode::hybrid;
  /// 0 means no cap.
  std::size_t generation_cap = 0;
  /// Seeds drawn from the problem's generator when no seeds file is given.
  std::size_t initial_size = 0;
  std::string seeds_file;
  std::size_t feedback_chars = 1200;
  std::uint64_t hv_mc_samples = 200'000;

  std::size_t effective_calls() const noexcept;
  std::size_t effective_initial_size() const noexcept;
};

struct ExperienceConfig {
  bool enabled = true;
  std::size_t good_count = 10;
  std::size_t bad_count = 10;
  std::size_t word_cap = 500;
  std::string prior_memo;
};

struct BackendConfig {
  /// "mock" or "remote".
  std::string kind = "mock";
  std::size_t parallelism = 4;
  llm::MockOptions mock;
  llm::RemoteOptions remote;
  /// USD per million tokens, for the cost summary.
  double price_input = 0.0;
  double price_output = 0.0;
};

struct ExternalConfig {
  std::vector<std::string> command;
  std::size_t workers = 1;
  double handshake_timeout_s = 10.0;
  double request_timeout_s = 60.0;
  std::size_t max_restarts = 3;
  std::vector<std::string> promote;
  llm::TaskTemplate task;
};

struct ProblemConfig {
  /// circle_packing, synthetic, text_toy or external.
  std::string kind = "circle_packing";
  CirclePackingOptions circles;
  SyntheticOptions synthetic;
  TextToyOptions text;
  ExternalConfig external;
  /// Per-objective weight overrides by name.
  std::vector<std::pair<std::string, double>> weights;
};

struct RunConfig {
  EngineConfig engine;
  ExperienceConfig experience;
  BackendConfig backend;
  ProblemConfig problem;
  /// "--set" style overrides that produced this config, in order.
  std::vector<std::string> overrides;
};

/// Parses TOML text, applies "section.key=value" overrides and validates.
/// Every invalid or unknown field is collected into one ConfigError.
RunConfig parse_config(std::string_view toml_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

/// Full effective configuration as TOML, defaults included, plus the list of
/// applied overrides. Parsing it back yields an identical RunConfig.
std::string to_toml(const RunConfig& config);

}  // namespace llmevo
