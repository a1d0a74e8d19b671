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

#include <fmt/format.h>

#include "llmevo/problems/external.hpp"

namespace llmevo {

namespace {

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

class ExternalProblem final : public Problem {
 public:
  explicit ExternalProblem(ExternalProblemOptions options)
      : options_(std::move(options)),
        pool_(std::make_unique<bridge::WorkerPool>(options_.command, options_.workers,
                                                   options_.worker)) {
    pool_->start();
    handshake_ = pool_->handshake();
    for (auto& o : handshake_.objectives) {
      for (const auto& [name, w] : options_.weights) {
        if (name == o.name) o.weight = w;
      }
    }
    for (auto& c : handshake_.constraints) {
      if (std::find(options_.promote.begin(), options_.promote.end(), c.name) !=
          options_.promote.end()) {
        c.promote = true;
      }
    }
  }

  ~ExternalProblem() override { pool_->shutdown(); }

  std::string_view name() const noexcept override { return options_.name; }
  std::vector<ObjectiveSpec> objective_specs() const override { return handshake_.objectives; }
  std::vector<ConstraintSpec> constraint_specs() const override { return handshake_.constraints; }
  const llm::TaskTemplate& task_template() const override { return options_.task; }

  DecodeOutcome decode(std::string_view text) const override {
    auto t = trimmed(text);
    if (t.empty()) return {std::nullopt, "empty candidate"};
    return {Payload{RawText{std::move(t)}}, {}};
  }

  ProblemEvaluation evaluate(const Payload& payload) const override {
    const Payload* one[] = {&payload};
    return evaluate_batch(one).front();
  }

  std::vector<ProblemEvaluation> evaluate_batch(
      std::span<const Payload* const> batch) const override {
    std::vector<ProblemEvaluation> out(batch.size());
    if (batch.empty()) return out;
    std::vector<std::string> texts;
    for (const auto* p : batch) texts.push_back(std::get<RawText>(*p).value);
    auto reply = pool_->evaluate(texts);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      auto& e = out[i];
      if (!reply.ok) {
        e.failed = true;
        e.raw.valid = false;
        e.raw.invalid_reason = fmt::format("evaluator failure: {}", reply.error);
        continue;
      }
      e.raw = bridge::to_raw_evaluation(reply.results[i], handshake_);
    }
    return out;
  }

  std::string canonical_key(const Payload& p) const override { return std::get<RawText>(p).value; }

  double distance(const Payload& a, const Payload& b) const override {
    return normalized_edit_distance(std::get<RawText>(a).value, std::get<RawText>(b).value);
  }

  std::string encode(const Payload& p) const override { return std::get<RawText>(p).value; }

  // Character-level edits over the characters the parents already use.
  std::string mock_variation(std::span<const std::string> parents, JobKind kind,
                             Rng& rng) const override {
    std::string child = trimmed(parents.front());
    std::string alphabet;
    for (const auto& p : parents) alphabet += trimmed(p);
    if (alphabet.empty()) alphabet = "C";
    if (kind == JobKind::crossover && parents.size() > 1) {
      const auto other = trimmed(parents[1]);
      child = child.substr(0, rng.below(child.size() + 1)) + other.substr(rng.below(other.size() + 1));
    }
    const auto pick = [&] { return alphabet[rng.below(alphabet.size())]; };
    switch (rng.below(3)) {
      case 0:
        if (!child.empty()) {
          child[rng.below(child.size())] = pick();
          break;
        }
        [[fallthrough]];
      case 1:
        child.insert(child.begin() + static_cast<std::ptrdiff_t>(rng.below(child.size() + 1)), pick());
        break;
      default:
        if (child.size() > 1) {
          child.erase(child.begin() + static_cast<std::ptrdiff_t>(rng.below(child.size())));
        }
    }
    child = trimmed(child);
    return child.empty() ? std::string(1, alphabet.front()) : child;
  }

  std::vector<std::string> random_seeds(std::size_t, Rng&) const override { return {}; }

 private:
  ExternalProblemOptions options_;
  std::unique_ptr<bridge::WorkerPool> pool_;
  bridge::Handshake handshake_;
};

}  // namespace

std::unique_ptr<Problem> make_external(ExternalProblemOptions options) {
  return std::make_unique<ExternalProblem>(std::move(options));
}

}  // namespace llmevo
