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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "llmevo/core/run.hpp"

namespace llmevo::cli {

struct SweepOptions {
  /// One of k_offspring, p_exp, selector.
  std::string axis;
  std::vector<std::string> values;
  std::size_t repeats = 1;
  /// Run cells concurrently, each in its own directory with its own problem
  /// and backend.
  bool parallel = false;
  /// Applied to every cell before the axis and seed overrides.
  std::vector<std::string> overrides;
};

struct SweepCell {
  std::string value;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  std::filesystem::path directory;
  bool failed = false;
  std::string error;
  metrics::MetricSnapshot final_snapshot;
  CostSummary cost;
};

struct Summary {
  double mean = 0.0;
  /// Sample standard deviation; 0 for a single value.
  double stddev = 0.0;
};

struct SweepRow {
  std::string value;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::optional<Summary> top1;
  std::optional<Summary> top10;
  std::optional<Summary> auc_top10;
  std::optional<Summary> hypervolume;
  std::optional<Summary> oracle_calls;
  /// Optimizer plus summarizer calls.
  std::optional<Summary> backend_calls;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepRow> rows;
  std::string table;
};

/// Checks the axis name and that every value yields a valid configuration.
/// Throws ConfigError otherwise.
void validate_sweep(std::string_view config_text, const SweepOptions& options);

/// One run per (value, repeat) under sweep_dir/<axis>=<value>/rep<r>. Repeat
/// r uses seed (base seed + r) for every value, so cells differ only in the
/// swept parameter. A failed cell is recorded and the sweep continues.
/// Writes sweep.csv and sweep.txt into sweep_dir.
SweepResult run_sweep(std::string_view config_text, const SweepOptions& options,
                      const std::filesystem::path& sweep_dir,
                      const std::function<void(const SweepCell&)>& on_cell = {});

Summary summarize(const std::vector<double>& values);

/// Mean +- std per value, in the given value order.
std::string sweep_table(const std::string& axis, const std::vector<SweepRow>& rows);

}  // namespace llmevo::cli
