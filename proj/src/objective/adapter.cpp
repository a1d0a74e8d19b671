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

#include "llmevo/objective/adapter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "llmevo/core/errors.hpp"

namespace llmevo {

std::string_view to_string(Direction d) noexcept {
  return d == Direction::maximize ? "maximize" : "minimize";
}

std::string_view to_string(Comparator c) noexcept {
  switch (c) {
    case Comparator::less_equal: return "<=";
    case Comparator::greater_equal: return ">=";
    case Comparator::equal: return "==";
  }
  return "?";
}

std::string_view to_string(Severity s) noexcept { return s == Severity::hard ? "hard" : "soft"; }

std::optional<Direction> parse_direction(std::string_view s) noexcept {
  if (s == "maximize" || s == "max") return Direction::maximize;
  if (s == "minimize" || s == "min") return Direction::minimize;
  return std::nullopt;
}

std::optional<Comparator> parse_comparator(std::string_view s) noexcept {
  if (s == "<=" || s == "le") return Comparator::less_equal;
  if (s == ">=" || s == "ge") return Comparator::greater_equal;
  if (s == "==" || s == "=" || s == "eq") return Comparator::equal;
  return std::nullopt;
}

std::optional<Severity> parse_severity(std::string_view s) noexcept {
  if (s == "hard") return Severity::hard;
  if (s == "soft") return Severity::soft;
  return std::nullopt;
}

double ConstraintValue::violation_margin() const noexcept {
  if (!std::isfinite(value)) return std::numeric_limits<double>::infinity();
  switch (comparator) {
    case Comparator::less_equal: return std::max(0.0, value - threshold);
    case Comparator::greater_equal: return std::max(0.0, threshold - value);
    case Comparator::equal: return std::max(0.0, std::abs(value - threshold) - tolerance);
  }
  return 0.0;
}

ConstraintValue measure(const ConstraintSpec& spec, double value) {
  return ConstraintValue{spec.name,  spec.comparator,          spec.threshold,
                         value,      spec.tolerance.value_or(0.0), spec.severity};
}

ObservedRanges::ObservedRanges(std::size_t m) : lo_(m, 0.0), hi_(m, 0.0) {}

void ObservedRanges::observe(std::span<const double> raw) {
  if (raw.size() != lo_.size()) throw std::invalid_argument("observed range size mismatch");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) continue;
    if (count_ == 0) {
      lo_[i] = hi_[i] = raw[i];
    } else {
      lo_[i] = std::min(lo_[i], raw[i]);
      hi_[i] = std::max(hi_[i], raw[i]);
    }
  }
  ++count_;
}

std::vector<double> normalize(std::span<const double> raw, std::span<const ObjectiveSpec> specs,
                              const ObservedRanges& ranges) {
  if (raw.size() != specs.size()) {
    throw std::invalid_argument(
        fmt::format("normalize: {} values for {} objectives", raw.size(), specs.size()));
  }
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) {
      throw std::invalid_argument(fmt::format("objective '{}' is not finite", specs[i].name));
    }
    double scaled = 0.5;
    if (specs[i].bounds) {
      const auto [lo, hi] = *specs[i].bounds;
      scaled = (raw[i] - lo) / (hi - lo);
    } else if (ranges.seen(i) && ranges.hi(i) > ranges.lo(i)) {
      scaled = (raw[i] - ranges.lo(i)) / (ranges.hi(i) - ranges.lo(i));
    }
    scaled = std::clamp(scaled, 0.0, 1.0);
    out[i] = specs[i].direction == Direction::maximize ? scaled : 1.0 - scaled;
  }
  return out;
}

double scalarize(std::span<const double> normalized, std::span<const ObjectiveSpec> specs) {
  if (normalized.size() != specs.size()) {
    throw std::invalid_argument("scalarize: dimension mismatch");
  }
  double f = 0.0;
  for (std::size_t i = 0; i < normalized.size(); ++i) f += specs[i].weight * normalized[i];
  return f;
}

ObjectiveSpec promote_constraint(const ConstraintSpec& spec) {
  if (spec.comparator == Comparator::equal && !spec.tolerance) {
    throw ConfigError(fmt::format(
        "constraint '{}': equality constraints need a tolerance band to be promoted", spec.name));
  }
  if (!(spec.margin_scale > 0.0) || !std::isfinite(spec.margin_scale)) {
    throw ConfigError(fmt::format("constraint '{}': margin_scale must be positive", spec.name));
  }
  ObjectiveSpec out;
  out.name = spec.name + "_margin";
  out.direction = Direction::minimize;
  out.bounds = Bounds{0.0, spec.margin_scale};
  out.weight = 1.0;
  out.source = ObjectiveSource::promoted_constraint;
  return out;
}

std::string format_feedback(const EvaluationResult& result, std::span<const ObjectiveSpec> specs,
                            const FeedbackOptions& options) {
  std::string out;
  if (!result.valid) {
    out += fmt::format("status: invalid ({})\n",
                       result.invalid_reason.empty() ? "unspecified" : result.invalid_reason);
  }
  std::size_t i = 0;
  for (const auto& spec : specs) {
    if (spec.source != ObjectiveSource::native) continue;
    if (i < result.raw.size()) {
      out += fmt::format("{}: {:.6g} ({})\n", spec.name, result.raw[i], to_string(spec.direction));
    }
    ++i;
  }
  for (const auto& c : result.constraints) {
    const double margin = c.violation_margin();
    if (margin > 0.0) {
      out += fmt::format("VIOLATED {} {} {:.6g}: value {:.6g}, margin {:.6g} ({})\n", c.name,
                         to_string(c.comparator), c.threshold, c.value, margin,
                         to_string(c.severity));
    } else {
      out += fmt::format("satisfied {} {} {:.6g}: value {:.6g}\n", c.name,
                         to_string(c.comparator), c.threshold, c.value);
    }
  }
  if (result.feedback && !result.feedback->empty()) {
    out += "note: ";
    out += *result.feedback;
    out += '\n';
  }
  if (out.size() > options.char_cap) out.resize(options.char_cap);
  return out;
}

FeedbackAdapter::FeedbackAdapter(std::vector<ObjectiveSpec> native,
                                 std::vector<ConstraintSpec> constraints)
    : objectives_(std::move(native)), constraints_(std::move(constraints)) {
  native_count_ = objectives_.size();
  for (const auto& c : constraints_) {
    if (c.promote) objectives_.push_back(promote_constraint(c));
  }
  std::vector<std::string> errors;
  std::set<std::string> names;
  for (const auto& o : objectives_) {
    if (!names.insert(o.name).second) errors.push_back(fmt::format("duplicate objective '{}'", o.name));
    if (o.bounds && !(o.bounds->lo < o.bounds->hi)) {
      errors.push_back(fmt::format("objective '{}': bounds need lo < hi", o.name));
    }
    if (!std::isfinite(o.weight) || o.weight < 0.0) {
      errors.push_back(fmt::format("objective '{}': weight must be finite and >= 0", o.name));
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  ranges_ = ObservedRanges(objectives_.size());
}

bool FeedbackAdapter::needs_running_stats() const noexcept {
  return std::any_of(objectives_.begin(), objectives_.end(),
                     [](const ObjectiveSpec& o) { return !o.bounds; });
}

EvaluationResult FeedbackAdapter::complete(const RawEvaluation& raw) {
  EvaluationResult out;
  out.constraints = raw.constraints;
  out.feedback = raw.feedback;
  out.raw = raw.objectives;
  if (!raw.valid) {
    out.valid = false;
    out.invalid_reason = raw.invalid_reason.empty() ? "oracle rejected candidate" : raw.invalid_reason;
    return out;
  }
  if (raw.objectives.size() != native_count_) {
    out.valid = false;
    out.invalid_reason = fmt::format("oracle returned {} objectives, expected {}",
                                     raw.objectives.size(), native_count_);
    return out;
  }
  for (const auto& spec : constraints_) {
    if (!spec.promote) continue;
    auto it = std::find_if(raw.constraints.begin(), raw.constraints.end(),
                           [&](const ConstraintValue& v) { return v.name == spec.name; });
    if (it == raw.constraints.end()) {
      out.valid = false;
      out.invalid_reason = fmt::format("constraint '{}' missing from oracle output", spec.name);
      return out;
    }
    out.raw.push_back(it->violation_margin());
  }
  for (std::size_t i = 0; i < out.raw.size(); ++i) {
    if (!std::isfinite(out.raw[i])) {
      out.valid = false;
      out.invalid_reason = fmt::format("non-finite value for '{}'", objectives_[i].name);
      return out;
    }
  }
  for (const auto& c : raw.constraints) {
    if (c.severity == Severity::hard && !c.satisfied()) {
      // Promoted hard constraints are scored, not rejected.
      const bool promoted = std::any_of(constraints_.begin(), constraints_.end(),
                                        [&](const ConstraintSpec& s) {
                                          return s.name == c.name && s.promote;
                                        });
      if (!promoted) {
        out.valid = false;
        out.invalid_reason = fmt::format("hard constraint '{}' violated", c.name);
        return out;
      }
    }
  }
  ranges_.observe(out.raw);
  out.valid = true;
  out.normalized = normalize(out.raw, objectives_, ranges_);
  out.fitness = scalarize(out.normalized, objectives_);
  return out;
}

void FeedbackAdapter::renormalize(EvaluationResult& result) const {
  if (!result.valid || !needs_running_stats()) return;
  result.normalized = normalize(result.raw, objectives_, ranges_);
  result.fitness = scalarize(result.normalized, objectives_);
}

}  // namespace llmevo
