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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "llmevo/core/config.hpp"
#include "llmevo/core/errors.hpp"

using namespace llmevo;

namespace {

const char* kBase = R"(
[engine]
population_size = 20
budget = 200
k_offspring = 3
seed = 11

[problem]
kind = "synthetic"

[problem.synthetic]
objectives = 3
dims = 5
)";

std::vector<std::string> errors_of(const std::string& text,
                                   const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.fields();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errors, const std::string& field) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const std::string& e) { return e.find(field) != std::string::npos; });
}

}  // namespace

TEST(Config, ParsesValuesAndDefaults) {
  const auto c = parse_config(kBase);
  EXPECT_EQ(c.engine.population_size, 20u);
  EXPECT_EQ(c.engine.k_offspring, 3u);
  EXPECT_EQ(c.engine.seed, 11u);
  EXPECT_EQ(c.engine.effective_calls(), 7u);
  EXPECT_DOUBLE_EQ(c.engine.p_exp, 0.5);
  EXPECT_EQ(c.experience.word_cap, 500u);
  EXPECT_EQ(c.problem.synthetic.objectives, 3u);
  EXPECT_EQ(c.backend.kind, "mock");
}

TEST(Config, OverridesApplyAndAreRecorded) {
  const auto c = parse_config(kBase, {"engine.p_exp=0.25", "engine.selector=\"fitness_only\""});
  EXPECT_DOUBLE_EQ(c.engine.p_exp, 0.25);
  EXPECT_EQ(c.engine.selector, SelectorMode::fitness_only);
  ASSERT_EQ(c.overrides.size(), 2u);
  EXPECT_EQ(c.overrides[0], "engine.p_exp=0.25");
  const auto snapshot = to_toml(c);
  EXPECT_NE(snapshot.find("engine.p_exp=0.25"), std::string::npos);
}

TEST(Config, SnapshotRoundTrips) {
  const auto c = parse_config(kBase, {"engine.budget=321"});
  const auto text = to_toml(c);
  const auto back = parse_config(text);
  EXPECT_EQ(to_toml(back), text);
  EXPECT_EQ(back.engine.budget, 321u);
  EXPECT_EQ(back.overrides, c.overrides);
}

TEST(Config, CollectsEveryError) {
  const auto errors = errors_of(kBase, {"engine.p_exp=1.5", "backend.parallelism=0"});
  EXPECT_TRUE(mentions(errors, "engine.p_exp"));
  EXPECT_TRUE(mentions(errors, "backend.parallelism"));
}

TEST(Config, UnknownFieldsRejected) {
  EXPECT_TRUE(mentions(errors_of(std::string(kBase) + "\n[engine2]\nx = 1\n"), "engine2"));
  EXPECT_TRUE(mentions(errors_of(kBase, {"engine.popsize=3"}), "popsize"));
}

TEST(Config, CrossFieldChecks) {
  EXPECT_TRUE(mentions(errors_of(kBase, {"engine.budget=5"}), "engine.budget"));
  EXPECT_TRUE(mentions(errors_of(kBase, {"engine.p_crossover=0.9", "engine.p_mutation=0.5"}),
                       "p_crossover + p_mutation"));
  EXPECT_TRUE(mentions(errors_of(kBase, {"backend.kind=\"remote\""}), "backend.remote.base_url"));
  EXPECT_TRUE(mentions(errors_of(kBase, {"problem.kind=\"external\""}), "problem.external.command"));
  EXPECT_TRUE(mentions(errors_of(kBase, {"problem.kind=\"nope\""}), "problem.kind"));
}

TEST(Config, WrongTypeAndSyntax) {
  EXPECT_TRUE(mentions(errors_of(kBase, {"engine.budget=\"lots\""}), "engine.budget"));
  EXPECT_TRUE(mentions(errors_of("[engine\n"), "syntax"));
  EXPECT_FALSE(errors_of(kBase, {"no_equals_sign"}).empty());
}
