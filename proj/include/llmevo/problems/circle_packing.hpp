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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace llmevo::circles {

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;

  friend bool operator==(const Circle&, const Circle&) = default;
};

using Layout = std::vector<Circle>;

inline constexpr double kFeasibilityTolerance = 1e-9;

/// Largest pairwise overlap r_i + r_j - |c_i - c_j|, floored at 0.
double max_overlap(const Layout& layout);
/// Largest amount any circle pokes out of the unit square, floored at 0.
double max_boundary_violation(const Layout& layout);
double radius_sum(const Layout& layout);
bool is_feasible(const Layout& layout, double tol = kFeasibilityTolerance);

struct RepairOptions {
  std::size_t iterations = 2000;
  /// Additive radius inflation at iteration 0; decays linearly to zero.
  double growth_step = 1e-3;
  std::size_t separation_sweeps = 4;
  /// Fraction of a residual overlap removed from each radius of the pair.
  double shrink_fraction = 0.1;
  double min_radius = 1e-6;
};

struct RepairResult {
  Layout layout;
  bool converged = false;
  /// Which start produced the result: "input", "equalized", "common" or
  /// "projection".
  std::string trajectory;
  double input_projection_sum = 0.0;
};

/// Makes a layout feasible and locally grows it. Three deterministic
/// trajectories start from the given centers (proposed radii, equalized radii,
/// one shared radius); each alternates center projection into [r, 1-r]^2,
/// pairwise separation along center lines, and radius inflation, then is made
/// exactly feasible by a uniform scale and grown circle by circle. The best
/// trajectory wins unless the feasible projection of the input is better.
RepairResult repair(const Layout& input, const RepairOptions& options = {});

/// Projects centers into the square, scales all radii by the largest factor
/// keeping every constraint, then grows each circle into its free space.
Layout feasible_projection(const Layout& input);

/// Uniform scale factor s such that scaling every radius by s keeps (or makes)
/// the layout feasible and is tight on at least one constraint.
double uniform_growth_factor(const Layout& layout);

/// Text form used in prompts, in the named-array style of the task template.
std::string encode(const Layout& layout);

struct ParsedLayout {
  std::optional<Layout> layout;
  std::string error;
};

/// Tolerant parser: reads every number after "centers" (pairs) and after
/// "radii". Expects exactly `n` circles.
ParsedLayout parse(std::string_view text, std::size_t n);

/// Circles sorted by (x, y, r) and printed at 1e-9 resolution.
std::string canonical_key(const Layout& layout);

/// Mean center displacement after matching circles in sorted order, divided by
/// the unit-square diagonal. Lies in [0, 1].
double distance(const Layout& a, const Layout& b);

}  // namespace llmevo::circles
