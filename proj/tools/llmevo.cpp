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

// Command-line front end: run, validate, report, sweep.
//
// Exit codes: 0 success, 2 configuration/validation error, 3 runtime failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include "llmevo/cli/report.hpp"
#include "llmevo/cli/sweep.hpp"
#include "llmevo/core/errors.hpp"
#include "llmevo/core/run.hpp"

namespace fs = std::filesystem;
using namespace llmevo;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot read {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : "-"; }

std::string progress_line(const GenerationReport& r, std::size_t budget) {
  const auto& c = r.counts;
  std::string line = fmt::format(
      "gen {:>4} | calls {:>6}/{} | jobs {} failed {} | proposed {} decodable {} novel {} valid {} "
      "| top1 {} top10 {} hv {:.4f} | memo v{}",
      r.generation, r.snapshot.consumed, budget, c.jobs, c.failed_calls, c.proposed, c.decodable,
      c.novel, c.valid, opt(r.snapshot.top1_f), opt(r.snapshot.top10_f), r.snapshot.hypervolume,
      r.memo_version);
  if (r.experience_skipped) line += " (memo kept)";
  if (!r.warning.empty()) line += " | warning: " + r.warning;
  return line;
}

void print_config_error(const ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& f : e.fields()) std::cerr << "  " << f << '\n';
}

std::string default_run_dir(std::uint64_t seed) {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("runs/{:%Y%m%d-%H%M%S}-seed{}", now, seed);
}

std::vector<std::string> split_values(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    for (std::string v; std::getline(ss, v, ',');) {
      if (!v.empty()) out.push_back(v);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted evolutionary optimization with a language-model variation operator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Execute one run and write its run directory");
  run->add_option("config", config_path, "TOML configuration")->required();
  run->add_option("--set", overrides, "Override a field, e.g. --set engine.budget=200");
  run->add_option("--seed", seed, "Run seed (recorded as an engine.seed override)");
  run->add_option("--out", out_dir, "Run directory (default runs/<time>-seed<seed>)");
  run->add_flag("--quiet", quiet, "No per-generation progress");

  auto* validate = app.add_subcommand("validate", "Parse and validate a configuration");
  validate->add_option("config", config_path, "TOML configuration")->required();
  validate->add_option("--set", overrides, "Override a field");
  validate->add_option("--seed", seed, "Run seed");

  std::vector<std::string> run_dirs;
  auto* report = app.add_subcommand("report", "Tables and curves from run directories");
  report->add_option("run_dirs", run_dirs, "One or more run directories")->required();
  report->add_option("--out", out_dir, "Output directory (default <run_dir>/report)");

  cli::SweepOptions sweep_opts;
  std::vector<std::string> raw_values;
  auto* sweep = app.add_subcommand("sweep", "One run per value of a parameter");
  sweep->add_option("config", config_path, "TOML configuration")->required();
  sweep->add_option("--axis", sweep_opts.axis, "k_offspring, p_exp or selector")->required();
  sweep->add_option("--values", raw_values, "Values (comma separated or repeated)")->required();
  sweep->add_option("--repeats", sweep_opts.repeats, "Seeds per value")->default_val(1);
  sweep->add_flag("--parallel", sweep_opts.parallel, "Run cells concurrently");
  sweep->add_option("--set", overrides, "Override a field in every cell");
  sweep->add_option("--seed", seed, "Base seed");
  sweep->add_option("--out", out_dir, "Sweep directory")->required();
  sweep->add_flag("--quiet", quiet, "No per-cell progress");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (seed) overrides.push_back(fmt::format("engine.seed={}", *seed));

  try {
    if (*validate) {
      const auto config = load_config(config_path, overrides);
      std::cout << "configuration valid\n" << to_toml(config);
      return 0;
    }

    if (*run) {
      const auto config = load_config(config_path, overrides);
      const fs::path dir = out_dir.empty() ? fs::path(default_run_dir(config.engine.seed)) : fs::path(out_dir);
      RunOptions options;
      if (!quiet) {
        options.progress = [&](const GenerationReport& r) {
          std::cout << progress_line(r, config.engine.budget) << std::endl;
        };
      }
      const auto outcome = execute_run(config, dir, options);
      if (outcome.failed) {
        std::cerr << "run failed: " << outcome.error << "\npartial run directory: " << dir.string()
                  << '\n';
        return kExitRuntime;
      }
      std::cout << fmt::format("done: {} after {} generation(s); top1 {} top10 {}; {} oracle calls, "
                               "{} backend calls; run directory {}\n",
                               outcome.stop.reason, outcome.generations,
                               opt(outcome.final_snapshot.top1_f),
                               opt(outcome.final_snapshot.top10_f), outcome.final_snapshot.consumed,
                               outcome.cost.optimizer_calls + outcome.cost.summarizer_calls,
                               dir.string());
      return 0;
    }

    if (*report) {
      std::vector<fs::path> dirs(run_dirs.begin(), run_dirs.end());
      for (const auto& d : dirs) {
        if (!fs::is_directory(d)) throw ConfigError(fmt::format("report: no such directory {}", d.string()));
      }
      const fs::path out = out_dir.empty() ? dirs.front() / "report" : fs::path(out_dir);
      const auto result = cli::write_report(dirs, out);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << result.text;
      for (const auto& img : result.images) std::cout << "wrote " << img.string() << '\n';
      return 0;
    }

    if (*sweep) {
      sweep_opts.values = split_values(raw_values);
      sweep_opts.overrides = overrides;
      const std::string text = read_text(config_path);
      const auto result = cli::run_sweep(text, sweep_opts, out_dir, [&](const cli::SweepCell& c) {
        if (quiet) return;
        std::cout << fmt::format("{}={} rep{} seed {}: {}", sweep_opts.axis, c.value, c.repeat,
                                 c.seed,
                                 c.failed ? "FAILED (" + c.error + ")"
                                          : fmt::format("top10 {} calls {}",
                                                        opt(c.final_snapshot.top10_f),
                                                        c.cost.optimizer_calls))
                  << std::endl;
      });
      std::cout << result.table;
      return 0;
    }
  } catch (const ConfigError& e) {
    print_config_error(e);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
