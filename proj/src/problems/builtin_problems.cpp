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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>

#include <fmt/format.h>

#include "llmevo/kernels/kernels.hpp"
#include "llmevo/problems/problem.hpp"

namespace llmevo {

std::vector<ProblemEvaluation> Problem::evaluate_batch(std::span<const Payload* const> batch) const {
  std::vector<ProblemEvaluation> out(batch.size());
  kernels::parallel_for(batch.size(), [&](std::size_t i) {
    try {
      out[i] = evaluate(*batch[i]);
    } catch (const std::exception& e) {
      out[i].raw.valid = false;
      out[i].raw.invalid_reason = fmt::format("evaluation failed: {}", e.what());
    }
  });
  return out;
}

double normalized_edit_distance(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 0.0;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) / static_cast<double>(std::max(a.size(), b.size()));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// ---------------------------------------------------------------------------
// Circle packing

class CirclePacking final : public Problem {
 public:
  explicit CirclePacking(CirclePackingOptions options) : options_(options) {
    tmpl_.task_description = fmt::format(
        "Propose layouts for the circle_packing problem: place {} circles inside the unit "
        "square [0,1] x [0,1] so that the sum of their radii is as large as possible.",
        options_.circles);
    tmpl_.output_format =
        "Each candidate starts with <candidate> and ends with </candidate>. Example:\n"
        "<candidate>\n"
        "centers = np.array([\n    [0.50, 0.50], [0.30, 0.50], ...\n])\n"
        "radii = np.array([\n    0.12, 0.10, ...\n])\n"
        "</candidate>";
    tmpl_.mutation_instruction = "Typical edits: move circle centers, resize radii.";
    tmpl_.crossover_instruction =
        "Typical edits: exchange center coordinates or radii between the two parents.";
    tmpl_.additional_requirements =
        "Keep every center inside the unit square. Large moves are welcome; overlaps and "
        "boundary violations are repaired automatically before scoring.";
    tmpl_.objective_descriptions = {{"radii", "sum of all circle radii"}};
  }

  std::string_view name() const noexcept override { return "circle_packing"; }

  std::vector<ObjectiveSpec> objective_specs() const override {
    ObjectiveSpec radii;
    radii.name = "radii";
    radii.direction = Direction::maximize;
    // Upper bound: n circles cannot beat the area bound sqrt(n / pi).
    radii.bounds = Bounds{0.0, std::sqrt(static_cast<double>(options_.circles) / std::numbers::pi)};
    return {radii};
  }

  std::vector<ConstraintSpec> constraint_specs() const override {
    ConstraintSpec overlap{"overlap", Comparator::less_equal, 0.0, Severity::hard,
                           options_.promote_constraints, 1.0, std::nullopt};
    ConstraintSpec boundary{"boundary", Comparator::less_equal, 0.0, Severity::hard,
                            options_.promote_constraints, 1.0, std::nullopt};
    return {overlap, boundary};
  }

  const llm::TaskTemplate& task_template() const override { return tmpl_; }

  DecodeOutcome decode(std::string_view text) const override {
    auto parsed = circles::parse(text, options_.circles);
    if (!parsed.layout) return {std::nullopt, parsed.error};
    return {Payload{std::move(*parsed.layout)}, {}};
  }

  ProblemEvaluation evaluate(const Payload& payload) const override {
    const auto& input = std::get<circles::Layout>(payload);
    ProblemEvaluation out;
    if (input.size() != options_.circles) {
      out.raw.valid = false;
      out.raw.invalid_reason = fmt::format("wrong circle count: expected {}, got {}",
                                           options_.circles, input.size());
      return out;
    }
    circles::Layout scored = input;
    if (options_.repair) {
      auto repaired = circles::repair(input, options_.repair_options);
      out.raw.feedback = fmt::format(
          "repair: {} via '{}' start; sum of radii {:.6f} after repair",
          repaired.converged ? "converged" : "did not converge", repaired.trajectory,
          circles::radius_sum(repaired.layout));
      scored = std::move(repaired.layout);
      out.scored = Payload{scored};
    }
    out.raw = evaluate_layout(scored, std::move(out.raw.feedback));
    return out;
  }

  static RawEvaluation evaluate_layout(const circles::Layout& layout,
                                       std::optional<std::string> feedback) {
    RawEvaluation raw;
    raw.objectives = {circles::radius_sum(layout)};
    const auto overlap = circles::max_overlap(layout);
    const auto boundary = circles::max_boundary_violation(layout);
    raw.constraints = {
        ConstraintValue{"overlap", Comparator::less_equal, 0.0, overlap, 0.0, Severity::hard},
        ConstraintValue{"boundary", Comparator::less_equal, 0.0, boundary, 0.0, Severity::hard}};
    raw.feedback = std::move(feedback);
    raw.valid = true;
    return raw;
  }

  std::string canonical_key(const Payload& p) const override {
    return circles::canonical_key(std::get<circles::Layout>(p));
  }

  double distance(const Payload& a, const Payload& b) const override {
    return circles::distance(std::get<circles::Layout>(a), std::get<circles::Layout>(b));
  }

  std::string encode(const Payload& p) const override {
    return circles::encode(std::get<circles::Layout>(p));
  }

  std::string mock_variation(std::span<const std::string> parents, JobKind kind,
                             Rng& rng) const override {
    auto first = circles::parse(parents.front(), options_.circles).layout;
    if (!first) first = random_layout(rng);
    circles::Layout child = *first;
    if (kind == JobKind::crossover && parents.size() > 1) {
      auto second = circles::parse(parents[1], options_.circles).layout;
      if (second) {
        for (std::size_t i = 0; i < child.size(); ++i) {
          if (rng.bernoulli(0.5)) child[i] = (*second)[i];
        }
      }
    }
    const double sigma = kind == JobKind::mutation ? 0.05 : 0.02;
    for (auto& c : child) {
      c.x = std::clamp(c.x + sigma * rng.normal(), 0.0, 1.0);
      c.y = std::clamp(c.y + sigma * rng.normal(), 0.0, 1.0);
      c.r = std::clamp(c.r * (1.0 + 0.1 * rng.normal()), 0.001, 0.5);
    }
    return circles::encode(child);
  }

  std::vector<std::string> random_seeds(std::size_t count, Rng& rng) const override {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(circles::encode(random_layout(rng)));
    return out;
  }

 private:
  circles::Layout random_layout(Rng& rng) const {
    circles::Layout layout(options_.circles);
    for (auto& c : layout) {
      c.x = rng.uniform01();
      c.y = rng.uniform01();
      c.r = rng.uniform(options_.seed_radius_lo, options_.seed_radius_hi);
    }
    return layout;
  }

  CirclePackingOptions options_;
  llm::TaskTemplate tmpl_;
};

// ---------------------------------------------------------------------------
// Synthetic multi-objective family

std::vector<double> scan_numbers(std::string_view text, std::string& error) {
  std::vector<double> out;
  const std::string buf(text);
  const char* p = buf.c_str();
  const char* end = p + buf.size();
  while (p < end) {
    const char c = *p;
    const bool starts = std::isdigit(static_cast<unsigned char>(c)) ||
                        ((c == '-' || c == '+' || c == '.') && p + 1 < end &&
                         (std::isdigit(static_cast<unsigned char>(p[1])) || p[1] == '.'));
    if (!starts) {
      ++p;
      continue;
    }
    char* stop = nullptr;
    const double v = std::strtod(p, &stop);
    if (stop == p) {
      ++p;
      continue;
    }
    if (!std::isfinite(v)) {
      error = "non-finite number";
      return {};
    }
    out.push_back(v);
    p = stop;
  }
  return out;
}

class Synthetic final : public Problem {
 public:
  explicit Synthetic(SyntheticOptions options) : options_(options) {
    tmpl_.task_description = fmt::format(
        "Propose points x in [0,1]^{} that trade off {} competing objectives.", options_.dims,
        options_.objectives);
    tmpl_.output_format =
        "Each candidate starts with <candidate> and ends with </candidate> and lists the "
        "coordinates. Example:\n<candidate>x = [0.25, 0.50, 0.75, 0.10]</candidate>";
    tmpl_.mutation_instruction = "Adjust a few coordinates by small amounts.";
    tmpl_.crossover_instruction = "Mix coordinates from the two parents.";
    tmpl_.additional_requirements =
        fmt::format("Exactly {} coordinates, each within [0, 1].", options_.dims);
    for (std::size_t i = 0; i < options_.objectives; ++i) {
      tmpl_.objective_descriptions.push_back(
          {fmt::format("f{}", i + 1), "smooth objective; all objectives conflict"});
    }
  }

  std::string_view name() const noexcept override { return "synthetic"; }

  std::vector<ObjectiveSpec> objective_specs() const override {
    std::vector<ObjectiveSpec> specs;
    for (std::size_t i = 0; i < options_.objectives; ++i) {
      specs.push_back({fmt::format("f{}", i + 1), Direction::maximize, Bounds{0.0, 1.0}, 1.0,
                       ObjectiveSource::native});
    }
    return specs;
  }

  std::vector<ConstraintSpec> constraint_specs() const override {
    return {ConstraintSpec{"box", Comparator::less_equal, 0.0, Severity::soft, false, 1.0,
                           std::nullopt}};
  }

  const llm::TaskTemplate& task_template() const override { return tmpl_; }

  DecodeOutcome decode(std::string_view text) const override {
    std::string error;
    auto values = scan_numbers(text, error);
    if (!error.empty()) return {std::nullopt, error};
    if (values.size() != options_.dims) {
      return {std::nullopt,
              fmt::format("expected {} coordinates, got {}", options_.dims, values.size())};
    }
    return {Payload{RealVector(std::move(values))}, {}};
  }

  ProblemEvaluation evaluate(const Payload& payload) const override {
    auto x = std::get<RealVector>(payload);
    double clamped = 0.0;
    for (auto& v : x) {
      const double c = std::clamp(v, 0.0, 1.0);
      clamped += std::abs(v - c);
      v = c;
    }
    const auto values = synthetic_values(x, options_);
    ProblemEvaluation out;
    out.raw.objectives = values.objectives;
    out.raw.constraints = {
        ConstraintValue{"box", Comparator::less_equal, 0.0, clamped, 0.0, Severity::soft}};
    if (clamped > 0.0) {
      out.raw.feedback = fmt::format("coordinates outside [0,1] were clamped (total {:.4g})",
                                     clamped);
    }
    return out;
  }

  std::string canonical_key(const Payload& p) const override {
    std::string key;
    for (double v : std::get<RealVector>(p)) key += fmt::format("{:.9f};", v);
    return key;
  }

  double distance(const Payload& a, const Payload& b) const override {
    const auto& xa = std::get<RealVector>(a);
    const auto& xb = std::get<RealVector>(b);
    if (xa.size() != xb.size() || xa.empty()) return xa.size() == xb.size() ? 0.0 : 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) {
      const double d = std::clamp(xa[i], 0.0, 1.0) - std::clamp(xb[i], 0.0, 1.0);
      s += d * d;
    }
    return std::min(1.0, std::sqrt(s / static_cast<double>(xa.size())));
  }

  std::string encode(const Payload& p) const override {
    const auto& x = std::get<RealVector>(p);
    std::string out = "x = [";
    for (std::size_t i = 0; i < x.size(); ++i) {
      out += fmt::format("{:.6f}{}", x[i], i + 1 < x.size() ? ", " : "");
    }
    return out + "]";
  }

  std::string mock_variation(std::span<const std::string> parents, JobKind kind,
                             Rng& rng) const override {
    auto first = decode(parents.front());
    RealVector child = first.payload ? std::get<RealVector>(*first.payload) : random_point(rng);
    double sigma = options_.mutation_sigma;
    if (kind == JobKind::crossover && parents.size() > 1) {
      auto second = decode(parents[1]);
      if (second.payload) {
        const auto& other = std::get<RealVector>(*second.payload);
        for (std::size_t i = 0; i < child.size(); ++i) {
          if (rng.bernoulli(0.5)) child[i] = other[i];
        }
      }
      sigma *= 0.5;
    }
    for (auto& v : child) v = std::clamp(v + sigma * rng.normal(), 0.0, 1.0);
    return encode(Payload{child});
  }

  std::vector<std::string> random_seeds(std::size_t count, Rng& rng) const override {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(encode(Payload{random_point(rng)}));
    return out;
  }

 private:
  RealVector random_point(Rng& rng) const {
    RealVector x(options_.dims);
    for (auto& v : x) v = rng.uniform01();
    return x;
  }

  SyntheticOptions options_;
  llm::TaskTemplate tmpl_;
};

// ---------------------------------------------------------------------------
// Text toy

class TextToy final : public Problem {
 public:
  explicit TextToy(TextToyOptions options) : options_(std::move(options)) {
    tmpl_.task_description =
        fmt::format("Propose strings over the alphabet \"{}\" that match a hidden target "
                    "sentence of {} characters.",
                    options_.alphabet, options_.target.size());
    tmpl_.output_format =
        "Each candidate starts with <candidate> and ends with </candidate>. Example:\n"
        "<candidate>hello world</candidate>";
    tmpl_.mutation_instruction = "Change, insert or delete a few characters.";
    tmpl_.crossover_instruction = "Join a prefix of one parent with a suffix of the other.";
    tmpl_.additional_requirements = "Use only characters from the alphabet.";
    tmpl_.objective_descriptions = {
        {"match", "fraction of target positions with the right character"},
        {"length_error", "absolute difference between candidate and target length"}};
  }

  std::string_view name() const noexcept override { return "text_toy"; }

  std::vector<ObjectiveSpec> objective_specs() const override {
    return {{"match", Direction::maximize, Bounds{0.0, 1.0}, 1.0, ObjectiveSource::native},
            {"length_error", Direction::minimize,
             Bounds{0.0, static_cast<double>(options_.target.size())}, 1.0,
             ObjectiveSource::native}};
  }

  std::vector<ConstraintSpec> constraint_specs() const override { return {}; }

  const llm::TaskTemplate& task_template() const override { return tmpl_; }

  DecodeOutcome decode(std::string_view text) const override {
    const auto t = trim(text);
    if (t.empty()) return {std::nullopt, "empty string"};
    for (char c : t) {
      if (options_.alphabet.find(c) == std::string::npos) {
        return {std::nullopt, fmt::format("character '{}' is outside the alphabet",
                                          std::isprint(static_cast<unsigned char>(c)) ? c : '?')};
      }
    }
    return {Payload{TokenString{std::string(t)}}, {}};
  }

  ProblemEvaluation evaluate(const Payload& payload) const override {
    const auto& s = std::get<TokenString>(payload).value;
    const auto& target = options_.target;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(s.size(), target.size()); ++i) {
      if (s[i] == target[i]) ++hits;
    }
    ProblemEvaluation out;
    out.raw.objectives = {
        static_cast<double>(hits) / static_cast<double>(target.size()),
        std::abs(static_cast<double>(s.size()) - static_cast<double>(target.size()))};
    return out;
  }

  std::string canonical_key(const Payload& p) const override {
    return std::get<TokenString>(p).value;
  }

  double distance(const Payload& a, const Payload& b) const override {
    return normalized_edit_distance(std::get<TokenString>(a).value,
                                    std::get<TokenString>(b).value);
  }

  std::string encode(const Payload& p) const override { return std::get<TokenString>(p).value; }

  std::string mock_variation(std::span<const std::string> parents, JobKind kind,
                             Rng& rng) const override {
    std::string child(trim(parents.front()));
    if (kind == JobKind::crossover && parents.size() > 1) {
      const std::string other(trim(parents[1]));
      const auto cut_a = static_cast<std::size_t>(rng.below(child.size() + 1));
      const auto cut_b = static_cast<std::size_t>(rng.below(other.size() + 1));
      child = child.substr(0, cut_a) + other.substr(cut_b);
    }
    const auto edits = 1 + rng.below(3);
    for (std::uint64_t e = 0; e < edits; ++e) {
      const char c = options_.alphabet[rng.below(options_.alphabet.size())];
      const auto op = rng.below(3);
      if (op == 0 && !child.empty()) {
        child[rng.below(child.size())] = c;
      } else if (op == 1 || child.empty()) {
        child.insert(child.begin() + static_cast<std::ptrdiff_t>(rng.below(child.size() + 1)), c);
      } else if (child.size() > 1) {
        child.erase(child.begin() + static_cast<std::ptrdiff_t>(rng.below(child.size())));
      }
    }
    const auto t = trim(child);
    return t.empty() ? std::string(1, options_.alphabet.front()) : std::string(t);
  }

  std::vector<std::string> random_seeds(std::size_t count, Rng& rng) const override {
    std::vector<std::string> out;
    const std::size_t n = options_.target.size();
    for (std::size_t i = 0; i < count; ++i) {
      const auto len = n / 2 + static_cast<std::size_t>(rng.below(n + 1));
      std::string s;
      for (std::size_t k = 0; k < len; ++k) {
        s += options_.alphabet[rng.below(options_.alphabet.size())];
      }
      const auto t = trim(s);
      out.emplace_back(t.empty() ? std::string(1, options_.alphabet.front()) : std::string(t));
    }
    return out;
  }

 private:
  TextToyOptions options_;
  llm::TaskTemplate tmpl_;
};

}  // namespace

SyntheticValues synthetic_values(std::span<const double> x, const SyntheticOptions& options) {
  const std::size_t m = options.objectives;
  const std::size_t positions = m - 1;
  SyntheticValues out;
  double mean_pos = 0.0;
  for (std::size_t i = 0; i < positions; ++i) mean_pos += x[i];
  mean_pos /= static_cast<double>(positions);
  for (std::size_t j = positions; j < x.size(); ++j) {
    out.g += (x[j] - mean_pos) * (x[j] - mean_pos);
  }
  // Spherical coordinates: s_1 = prod cos, s_i = (prod_{<} cos) sin, ...
  std::vector<double> s(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k + i + 1 < m; ++k) s[i] *= std::cos(x[k] * std::numbers::pi / 2.0);
    if (i > 0) s[i] *= std::sin(x[m - 1 - i] * std::numbers::pi / 2.0);
  }
  out.objectives.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double on_front = std::pow(std::max(0.0, s[i] * s[i]), 1.0 / options.shape);
    out.objectives[i] = on_front / (1.0 + out.g);
  }
  return out;
}

std::unique_ptr<Problem> make_circle_packing(const CirclePackingOptions& options) {
  return std::make_unique<CirclePacking>(options);
}

std::unique_ptr<Problem> make_synthetic(const SyntheticOptions& options) {
  if (options.objectives < 2) throw std::invalid_argument("synthetic: need at least 2 objectives");
  if (options.dims < options.objectives - 1) {
    throw std::invalid_argument("synthetic: dims must be at least objectives - 1");
  }
  if (!(options.shape > 0.0)) throw std::invalid_argument("synthetic: shape must be positive");
  return std::make_unique<Synthetic>(options);
}

std::unique_ptr<Problem> make_text_toy(const TextToyOptions& options) {
  if (options.target.empty() || options.alphabet.empty()) {
    throw std::invalid_argument("text_toy: target and alphabet must be non-empty");
  }
  return std::make_unique<TextToy>(options);
}

}  // namespace llmevo
