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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llmevo/core/candidate.hpp"
#include "llmevo/core/rng.hpp"
#include "llmevo/llm/prompt.hpp"
#include "llmevo/objective/adapter.hpp"

namespace llmevo {

struct DecodeOutcome {
  std::optional<Payload> payload;
  std::string error;
};

/// Oracle output plus, for problems that post-process proposals (circle
/// repair), the payload that was actually scored.
struct ProblemEvaluation {
  RawEvaluation raw;
  std::optional<Payload> scored;
  /// The oracle never produced a result (worker crash, timeout, protocol
  /// error). Such candidates are reported invalid and are not charged.
  bool failed = false;
};

/// A black-box optimization domain. evaluate() must be deterministic for a
/// fixed payload and safe to call concurrently; distance() must be symmetric,
/// zero on identical payloads and bounded by 1.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string_view name() const noexcept = 0;
  virtual std::vector<ObjectiveSpec> objective_specs() const = 0;
  virtual std::vector<ConstraintSpec> constraint_specs() const = 0;
  virtual const llm::TaskTemplate& task_template() const = 0;

  virtual DecodeOutcome decode(std::string_view text) const = 0;
  virtual ProblemEvaluation evaluate(const Payload& payload) const = 0;
  /// Evaluates in input order. The default runs evaluate() across OpenMP
  /// threads.
  virtual std::vector<ProblemEvaluation> evaluate_batch(std::span<const Payload* const> batch) const;

  virtual std::string canonical_key(const Payload& payload) const = 0;
  virtual double distance(const Payload& a, const Payload& b) const = 0;
  virtual std::string encode(const Payload& payload) const = 0;

  /// Domain-legal perturbation used by the mock backend: one parent for
  /// mutation, two for crossover.
  virtual std::string mock_variation(std::span<const std::string> parents, JobKind kind,
                                     Rng& rng) const = 0;
  /// Random initial candidates (text form).
  virtual std::vector<std::string> random_seeds(std::size_t count, Rng& rng) const = 0;
};

/// Circle packing in the unit square: maximize the sum of radii after the
/// repair step; overlap and boundary margins are reported as constraints.
struct CirclePackingOptions {
  std::size_t circles = 4;
  bool repair = true;
  circles::RepairOptions repair_options;
  bool promote_constraints = true;
  /// Radius range for random seeds.
  double seed_radius_lo = 0.01;
  double seed_radius_hi = 0.1;
};

std::unique_ptr<Problem> make_circle_packing(const CirclePackingOptions& options);

/// Synthetic multi-objective family on [0,1]^d with a known front: positions
/// x_0..x_{M-2} place a point on the unit sphere s, the remaining variables
/// add g = sum (x_j - mean position)^2, and f_i = (s_i^2)^(1/shape) / (1 + g).
/// Every point satisfies sum f_i^shape <= 1 with equality exactly on the
/// front; shape > 1 gives a concave front, shape < 1 a convex one.
struct SyntheticOptions {
  std::size_t dims = 4;
  std::size_t objectives = 2;
  double shape = 2.0;
  /// Gaussian step of the mock mutation.
  double mutation_sigma = 0.1;
};

struct SyntheticValues {
  std::vector<double> objectives;
  double g = 0.0;
};

SyntheticValues synthetic_values(std::span<const double> x, const SyntheticOptions& options);
std::unique_ptr<Problem> make_synthetic(const SyntheticOptions& options);

/// Text toy: evolve a lowercase string towards a target. Objectives are match
/// fraction (maximize) and length error (minimize).
struct TextToyOptions {
  std::string target = "evolutionary search with language models";
  std::string alphabet = "abcdefghijklmnopqrstuvwxyz ";
};

std::unique_ptr<Problem> make_text_toy(const TextToyOptions& options);

/// Normalized Levenshtein distance in [0, 1].
double normalized_edit_distance(std::string_view a, std::string_view b);

}  // namespace llmevo
