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

#include "llmevo/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "llmevo/core/errors.hpp"

namespace llmevo::cli {

namespace fs = std::filesystem;

namespace {

std::string axis_key(const std::string& axis) {
  if (axis == "k_offspring" || axis == "p_exp" || axis == "selector") return "engine." + axis;
  throw ConfigError(
      fmt::format("sweep.axis: must be one of k_offspring, p_exp, selector (got '{}')", axis));
}

std::vector<std::string> cell_overrides(const SweepOptions& options, const std::string& value,
                                        std::optional<std::uint64_t> seed) {
  auto out = options.overrides;
  out.push_back(axis_key(options.axis) + "=" + value);
  if (seed) out.push_back(fmt::format("engine.seed={}", *seed));
  return out;
}

std::string cell_text(const std::optional<Summary>& s, int digits) {
  if (!s) return "-";
  return fmt::format("{:.{}f} ± {:.{}f}", s->mean, digits, s->stddev, digits);
}

std::string csv_number(const std::optional<Summary>& s, bool std_part) {
  if (!s) return {};
  return fmt::format("{:.6f}", std_part ? s->stddev : s->mean);
}

}  // namespace

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

void validate_sweep(std::string_view config_text, const SweepOptions& options) {
  std::vector<std::string> errors;
  axis_key(options.axis);
  if (options.values.empty()) errors.push_back("sweep.values: at least one value is required");
  if (options.repeats == 0) errors.push_back("sweep.repeats: must be >= 1");
  for (const auto& v : options.values) {
    try {
      parse_config(config_text, cell_overrides(options, v, std::nullopt));
    } catch (const ConfigError& e) {
      for (const auto& f : e.fields()) errors.push_back(fmt::format("value '{}': {}", v, f));
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

SweepResult run_sweep(std::string_view config_text, const SweepOptions& options,
                      const fs::path& sweep_dir,
                      const std::function<void(const SweepCell&)>& on_cell) {
  validate_sweep(config_text, options);
  const std::uint64_t base_seed = parse_config(config_text, options.overrides).engine.seed;

  SweepResult result;
  for (const auto& v : options.values) {
    for (std::size_t r = 0; r < options.repeats; ++r) {
      SweepCell cell;
      cell.value = v;
      cell.repeat = r;
      cell.seed = base_seed + r;
      cell.directory = sweep_dir / fmt::format("{}={}", options.axis, v) / fmt::format("rep{}", r);
      result.cells.push_back(std::move(cell));
    }
  }

  std::mutex report_mutex;
  const auto run_cell = [&](SweepCell& cell) {
    try {
      const auto config = parse_config(config_text, cell_overrides(options, cell.value, cell.seed));
      const auto outcome = execute_run(config, cell.directory);
      cell.failed = outcome.failed;
      cell.error = outcome.error;
      cell.final_snapshot = outcome.final_snapshot;
      cell.cost = outcome.cost;
    } catch (const std::exception& e) {
      cell.failed = true;
      cell.error = e.what();
    }
    if (on_cell) {
      std::lock_guard lock(report_mutex);
      on_cell(cell);
    }
  };

  if (options.parallel) {
    std::atomic<std::size_t> next{0};
    const std::size_t threads = std::min<std::size_t>(
        result.cells.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < result.cells.size();) run_cell(result.cells[i]);
      });
    }
  } else {
    for (auto& cell : result.cells) run_cell(cell);
  }

  for (const auto& v : options.values) {
    SweepRow row;
    row.value = v;
    std::vector<double> top1, top10, auc, hv, oracle, backend;
    for (const auto& c : result.cells) {
      if (c.value != v) continue;
      if (c.failed) {
        ++row.failed;
        continue;
      }
      ++row.completed;
      if (c.final_snapshot.top1_f) top1.push_back(*c.final_snapshot.top1_f);
      if (c.final_snapshot.top10_f) top10.push_back(*c.final_snapshot.top10_f);
      auc.push_back(c.final_snapshot.auc_top10);
      hv.push_back(c.final_snapshot.hypervolume);
      oracle.push_back(static_cast<double>(c.final_snapshot.consumed));
      backend.push_back(static_cast<double>(c.cost.optimizer_calls + c.cost.summarizer_calls));
    }
    const auto fill = [](const std::vector<double>& xs) {
      return xs.empty() ? std::nullopt : std::optional<Summary>(summarize(xs));
    };
    row.top1 = fill(top1);
    row.top10 = fill(top10);
    row.auc_top10 = fill(auc);
    row.hypervolume = fill(hv);
    row.oracle_calls = fill(oracle);
    row.backend_calls = fill(backend);
    result.rows.push_back(std::move(row));
  }

  result.table = sweep_table(options.axis, result.rows);
  fs::create_directories(sweep_dir);
  write_file_atomic(sweep_dir / "sweep.txt", result.table);

  std::string csv = fmt::format(
      "{},completed,failed,top1_mean,top1_std,top10_mean,top10_std,auc_top10_mean,auc_top10_std,"
      "hypervolume_mean,hypervolume_std,oracle_calls_mean,oracle_calls_std,backend_calls_mean,"
      "backend_calls_std\n",
      options.axis);
  for (const auto& r : result.rows) {
    csv += fmt::format("{},{},{}", r.value, r.completed, r.failed);
    for (const auto* s : {&r.top1, &r.top10, &r.auc_top10, &r.hypervolume, &r.oracle_calls,
                          &r.backend_calls}) {
      csv += "," + csv_number(*s, false) + "," + csv_number(*s, true);
    }
    csv += "\n";
  }
  write_file_atomic(sweep_dir / "sweep.csv", csv);
  return result;
}

std::string sweep_table(const std::string& axis, const std::vector<SweepRow>& rows) {
  std::size_t value_w = axis.size();
  for (const auto& r : rows) value_w = std::max(value_w, r.value.size());
  std::string out = fmt::format("{:<{}}  {:>6}  {:>17}  {:>17}  {:>17}  {:>17}  {:>15}  {:>15}\n",
                                axis, value_w, "runs", "top1", "top10", "auc_top10",
                                "hypervolume", "oracle_calls", "backend_calls");
  for (const auto& r : rows) {
    if (r.completed == 0) {
      out += fmt::format("{:<{}}  {:>6}  FAILED\n", r.value, value_w,
                         fmt::format("0/{}", r.failed));
      continue;
    }
    out += fmt::format("{:<{}}  {:>6}  {:>17}  {:>17}  {:>17}  {:>17}  {:>15}  {:>15}{}\n", r.value,
                       value_w, fmt::format("{}/{}", r.completed, r.completed + r.failed),
                       cell_text(r.top1, 4), cell_text(r.top10, 4), cell_text(r.auc_top10, 4),
                       cell_text(r.hypervolume, 4), cell_text(r.oracle_calls, 1),
                       cell_text(r.backend_calls, 1),
                       r.failed > 0 ? fmt::format("  ({} failed)", r.failed) : std::string{});
  }
  return out;
}

}  // namespace llmevo::cli
