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

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "llmevo/core/errors.hpp"
#include "llmevo/llm/prompt.hpp"

using namespace llmevo;
using namespace llmevo::llm;

namespace {

const std::vector<ObjectiveSpec> kSpecs{
    {"qed", Direction::maximize, Bounds{0, 1}, 1.0, ObjectiveSource::native},
    {"sa", Direction::minimize, Bounds{1, 10}, 1.0, ObjectiveSource::native}};

TaskTemplate make_template() {
  TaskTemplate t;
  t.task_description = "Design molecules.";
  t.output_format = "One SMILES per <candidate></candidate> block.";
  t.mutation_instruction = "MUTATE-ONE-PARENT";
  t.crossover_instruction = "CROSS-TWO-PARENTS";
  t.additional_requirements = "Keep it small.";
  t.objective_descriptions = {{"qed", "drug-likeness"}};
  return t;
}

std::size_t occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(ParseCandidates, SingleTag) {
  const auto r = parse_candidates("<candidate>c1ccccc1</candidate>", 1);
  EXPECT_EQ(r.candidates, std::vector<std::string>{"c1ccccc1"});
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(ParseCandidates, DocumentOrderAndTrim) {
  const auto r = parse_candidates("x <candidate>\n CCO \n</candidate> y <candidate>CCN</candidate>", 2);
  EXPECT_EQ(r.candidates, (std::vector<std::string>{"CCO", "CCN"}));
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(ParseCandidates, UnterminatedYieldsOneDiagnostic) {
  const auto r = parse_candidates("<candidate>abc", 1);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(ParseCandidates, CountMismatchLoggedButKept) {
  const auto r = parse_candidates("<candidate>a</candidate><candidate>b</candidate>"
                                  "<candidate>c</candidate>",
                                  2);
  EXPECT_EQ(r.candidates.size(), 3u);
  EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(ParseCandidates, NestedAndEmpty) {
  const auto r = parse_candidates("<candidate>a<candidate>b</candidate><candidate> </candidate>", 1);
  EXPECT_EQ(r.candidates, std::vector<std::string>{"b"});
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(ParseCandidates, NoTags) {
  const auto r = parse_candidates("I could not think of anything.", 2);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(ParseCandidates, RandomStringsNeverFault) {
  std::mt19937_64 g(17);
  const std::vector<std::string> pieces{"<candidate>", "</candidate>", "<cand", "idate>", "<",
                                        ">", "/", "x", " ", "\n", std::string(1, '\0'), "\xff"};
  for (int t = 0; t < 10'000; ++t) {
    std::string s;
    const std::size_t n = g() % 40;
    for (std::size_t i = 0; i < n; ++i) {
      if (g() % 3 == 0) {
        s.push_back(static_cast<char>(g() & 0xff));
      } else {
        s += pieces[g() % pieces.size()];
      }
    }
    ParseResult r;
    ASSERT_NO_THROW(r = parse_candidates(s, 1 + g() % 4));
    for (const auto& c : r.candidates) {
      EXPECT_FALSE(c.empty());
      EXPECT_EQ(c.find("<candidate>"), std::string::npos);
    }
  }
}

TEST(BuildPrompt, MutationGating) {
  const auto t = make_template();
  const auto b = build_prompt(t, kSpecs, JobKind::mutation, {{1, "CCO", "qed 0.4"}}, std::nullopt, 2);
  EXPECT_NE(b.body.find("MUTATE-ONE-PARENT"), std::string::npos);
  EXPECT_EQ(b.body.find("CROSS-TWO-PARENTS"), std::string::npos);
  EXPECT_NE(b.body.find("exactly 2 new candidates"), std::string::npos);
  EXPECT_NE(b.body.find("CCO"), std::string::npos);
  EXPECT_NE(b.body.find("drug-likeness"), std::string::npos);
  EXPECT_EQ(b.k_request, 2u);
}

TEST(BuildPrompt, CrossoverGating) {
  const auto t = make_template();
  const auto b = build_prompt(t, kSpecs, JobKind::crossover,
                              {{1, "CCO", "f1"}, {2, "CCN", "f2"}}, std::nullopt, 1);
  EXPECT_NE(b.body.find("CROSS-TWO-PARENTS"), std::string::npos);
  EXPECT_EQ(b.body.find("MUTATE-ONE-PARENT"), std::string::npos);
  EXPECT_LT(b.body.find("CCO"), b.body.find("CCN"));
}

TEST(BuildPrompt, MemoAppearsOnceVerbatim) {
  const auto t = make_template();
  const std::string memo = "Aromatic rings with a hydroxyl scored well.";
  const auto with = build_prompt(t, kSpecs, JobKind::mutation, {{1, "CCO", ""}}, memo, 1);
  EXPECT_EQ(occurrences(with.body, memo), 1u);
  const auto without = build_prompt(t, kSpecs, JobKind::mutation, {{1, "CCO", ""}}, std::nullopt, 1);
  EXPECT_EQ(without.body.find("Experience"), std::string::npos);
}

TEST(BuildPrompt, Deterministic) {
  const auto t = make_template();
  const auto a = build_prompt(t, kSpecs, JobKind::mutation, {{1, "CCO", "x"}}, "memo", 3);
  const auto b = build_prompt(t, kSpecs, JobKind::mutation, {{1, "CCO", "x"}}, "memo", 3);
  EXPECT_EQ(a.body, b.body);
  EXPECT_EQ(a.system_preamble, b.system_preamble);
}

TEST(TaskTemplate, ValidationErrors) {
  auto t = make_template();
  EXPECT_NO_THROW(t.validate(kSpecs));
  t.output_format = "one per line";
  t.objective_descriptions.push_back({"logp", "unknown"});
  try {
    t.validate(kSpecs);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.fields().size(), 2u);
  }
}
