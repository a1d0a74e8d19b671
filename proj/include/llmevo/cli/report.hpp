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

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "llmevo/metrics/metrics.hpp"

namespace llmevo::cli {

/// What a report needs from one run directory.
struct RunSeries {
  std::string label;
  std::vector<metrics::MetricSnapshot> generations;
  /// Fitness per oracle call in call order (0 for results marked invalid).
  std::vector<double> call_fitness;
  bool partial = false;
  std::vector<std::string> warnings;
};

/// Reads metrics.csv (falling back to the generation_end events when it is
/// missing) and the candidate events. A run without a complete manifest, or
/// with a FAILED marker, is partial.
RunSeries load_run(const std::filesystem::path& run_dir);

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Curve> curves;
};

std::string render_svg(const Chart& chart);

/// Fixed-width table of the final snapshot of each run.
std::string final_table(std::span<const RunSeries> runs);

struct ReportOutput {
  std::string text;
  std::vector<std::filesystem::path> images;
  std::vector<std::string> warnings;
  bool partial = false;
};

/// Writes fitness_vs_calls.svg, top10_vs_calls.svg and
/// hypervolume_vs_generation.svg into out_dir (one curve per run) and
/// returns the table text. Reads nothing but the run directories.
ReportOutput write_report(std::span<const std::filesystem::path> run_dirs,
                          const std::filesystem::path& out_dir);

}  // namespace llmevo::cli
