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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llmevo {

enum class Direction { maximize, minimize };
enum class ObjectiveSource { native, promoted_constraint };
enum class Comparator { less_equal, greater_equal, equal };
enum class Severity { hard, soft };

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(Comparator c) noexcept;
std::string_view to_string(Severity s) noexcept;
std::optional<Direction> parse_direction(std::string_view s) noexcept;
std::optional<Comparator> parse_comparator(std::string_view s) noexcept;
std::optional<Severity> parse_severity(std::string_view s) noexcept;

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct ObjectiveSpec {
  std::string name;
  Direction direction = Direction::maximize;
  std::optional<Bounds> bounds;
  double weight = 1.0;
  ObjectiveSource source = ObjectiveSource::native;
};

struct ConstraintSpec {
  std::string name;
  Comparator comparator = Comparator::less_equal;
  double threshold = 0.0;
  Severity severity = Severity::hard;
  bool promote = false;
  /// Violation margin that maps to a normalized score of 0 once promoted.
  double margin_scale = 1.0;
  /// Width of the accepted band around the threshold for `equal`.
  std::optional<double> tolerance;
};

/// One measured constraint value, self-describing so a feedback block can be
/// rendered without the spec at hand.
struct ConstraintValue {
  std::string name;
  Comparator comparator = Comparator::less_equal;
  double threshold = 0.0;
  double value = 0.0;
  double tolerance = 0.0;
  Severity severity = Severity::hard;

  /// Distance past the threshold (0 when satisfied).
  double violation_margin() const noexcept;
  bool satisfied() const noexcept { return violation_margin() <= 0.0; }
};

ConstraintValue measure(const ConstraintSpec& spec, double value);

/// What a problem's oracle returns: native objectives only.
struct RawEvaluation {
  std::vector<double> objectives;
  std::vector<ConstraintValue> constraints;
  std::optional<std::string> feedback;
  bool valid = true;
  std::string invalid_reason;
};

/// Oracle output after the adapter: raw holds native objectives followed by
/// promoted constraint margins; normalized is filled iff valid.
struct EvaluationResult {
  std::vector<double> raw;
  std::vector<double> normalized;
  std::vector<ConstraintValue> constraints;
  std::optional<std::string> feedback;
  bool valid = false;
  std::string invalid_reason;
  double fitness = 0.0;
};

/// Running per-objective min/max, used when an objective declares no bounds.
class ObservedRanges {
 public:
  ObservedRanges() = default;
  explicit ObservedRanges(std::size_t m);

  void observe(std::span<const double> raw);
  std::size_t size() const noexcept { return lo_.size(); }
  bool seen(std::size_t i) const noexcept { return count_ > 0 && i < lo_.size(); }
  double lo(std::size_t i) const { return lo_.at(i); }
  double hi(std::size_t i) const { return hi_.at(i); }

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::size_t count_ = 0;
};

/// Scales each raw value into [0, 1] with "larger is better": declared bounds
/// first, observed range otherwise (a degenerate range maps to 0.5), clamped,
/// and flipped for minimization. Throws std::invalid_argument on a size
/// mismatch or a non-finite input.
std::vector<double> normalize(std::span<const double> raw, std::span<const ObjectiveSpec> specs,
                              const ObservedRanges& ranges);

/// Weighted sum of normalized objectives.
double scalarize(std::span<const double> normalized, std::span<const ObjectiveSpec> specs);

/// Turns a constraint into a minimize-margin objective bounded by
/// [0, margin_scale]. Throws ConfigError for `equal` without a tolerance.
ObjectiveSpec promote_constraint(const ConstraintSpec& spec);

struct FeedbackOptions {
  std::size_t char_cap = 1200;
};

/// Compact prompt block: raw native objectives in spec order, one line per
/// constraint, then the oracle's free-text feedback verbatim. Output longer
/// than the cap is truncated at the tail.
std::string format_feedback(const EvaluationResult& result, std::span<const ObjectiveSpec> specs,
                            const FeedbackOptions& options = {});

/// Owns the objective/constraint layout of a problem and completes raw oracle
/// output into EvaluationResults.
class FeedbackAdapter {
 public:
  FeedbackAdapter() = default;
  FeedbackAdapter(std::vector<ObjectiveSpec> native, std::vector<ConstraintSpec> constraints);

  /// Native objectives followed by promoted constraints.
  const std::vector<ObjectiveSpec>& objectives() const noexcept { return objectives_; }
  const std::vector<ConstraintSpec>& constraints() const noexcept { return constraints_; }
  std::size_t native_count() const noexcept { return native_count_; }
  bool needs_running_stats() const noexcept;
  const ObservedRanges& ranges() const noexcept { return ranges_; }

  /// Appends promoted margins, checks hard constraints and finiteness, updates
  /// the observed ranges, normalizes and scalarizes.
  EvaluationResult complete(const RawEvaluation& raw);

  /// Re-derives normalized vectors and fitness from raw values using the
  /// current ranges (no-op when every objective has bounds).
  void renormalize(EvaluationResult& result) const;

  std::string feedback(const EvaluationResult& result, const FeedbackOptions& options = {}) const {
    return format_feedback(result, objectives_, options);
  }

 private:
  std::vector<ObjectiveSpec> objectives_;
  std::vector<ConstraintSpec> constraints_;
  std::size_t native_count_ = 0;
  ObservedRanges ranges_;
};

}  // namespace llmevo
