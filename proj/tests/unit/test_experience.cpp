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
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "llmevo/experience/experience.hpp"

using namespace llmevo;

namespace {

std::vector<Candidate> make_history(std::size_t n) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < n; ++i) {
    Candidate c;
    c.id = i + 1;
    c.text = "cand" + std::to_string(i);
    c.canonical_key = c.text;
    EvaluationResult e;
    e.valid = true;
    e.raw = {static_cast<double>(i)};
    e.normalized = {static_cast<double>(i) / static_cast<double>(n)};
    // Fitness order is a permutation of the ids.
    e.fitness = static_cast<double>((i * 37) % n);
    c.eval = e;
    out.push_back(c);
  }
  return out;
}

std::vector<const Candidate*> ptrs(const std::vector<Candidate>& v) {
  std::vector<const Candidate*> out;
  for (const auto& c : v) out.push_back(&c);
  return out;
}

const std::vector<ObjectiveSpec> kSpecs{{"f", Direction::maximize, Bounds{0, 100}, 1.0, ObjectiveSource::native}};

class FailingBackend final : public llm::Backend {
 public:
  std::string_view name() const noexcept override { return "failing"; }
  llm::BackendReply complete(const llm::BackendRequest&) override {
    throw llm::BackendError("timeout", 1);
  }
};

class EchoBackend final : public llm::Backend {
 public:
  explicit EchoBackend(std::string reply) : reply_(std::move(reply)) {}
  std::string_view name() const noexcept override { return "echo"; }
  llm::BackendReply complete(const llm::BackendRequest& r) override {
    last = r;
    return {reply_, {}, 0.0, 1};
  }
  llm::BackendRequest last;

 private:
  std::string reply_;
};

}  // namespace

TEST(Evidence, TwoCandidates) {
  auto h = make_history(2);
  h[0].eval->fitness = 0.2;
  h[1].eval->fitness = 0.9;
  Rng rng(1);
  const auto e = build_evidence(ptrs(h), kSpecs, {1, 1}, rng);
  ASSERT_EQ(e.good.size(), 1u);
  ASSERT_EQ(e.bad.size(), 1u);
  EXPECT_EQ(e.good[0].id, 2u);
  EXPECT_EQ(e.bad[0].id, 1u);
}

TEST(Evidence, ZeroBad) {
  const auto h = make_history(30);
  Rng rng(1);
  const auto e = build_evidence(ptrs(h), kSpecs, {10, 0}, rng);
  EXPECT_EQ(e.good.size(), 10u);
  EXPECT_TRUE(e.bad.empty());
}

TEST(Evidence, GoodIsTopAndBadIsStrictLowerHalf) {
  const auto h = make_history(100);
  std::vector<double> fit;
  for (const auto& c : h) fit.push_back(c.eval->fitness);
  std::sort(fit.rbegin(), fit.rend());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto e = build_evidence(ptrs(h), kSpecs, {10, 10}, rng);
    ASSERT_EQ(e.good.size(), 10u);
    ASSERT_EQ(e.bad.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_DOUBLE_EQ(e.good[i].fitness, fit[i]);
    std::set<CandidateId> ids;
    for (const auto& g : e.good) ids.insert(g.id);
    for (const auto& b : e.bad) {
      EXPECT_TRUE(ids.insert(b.id).second) << "good and bad overlap or bad repeats";
      EXPECT_LT(b.fitness, fit[49]);
    }
  }
}

TEST(Evidence, SmallHistoryShrinksWithoutOverlap) {
  for (std::size_t n = 1; n < 20; ++n) {
    const auto h = make_history(n);
    Rng rng(n);
    const auto e = build_evidence(ptrs(h), kSpecs, {10, 10}, rng);
    EXPECT_LE(e.good.size() + e.bad.size(), n);
    EXPECT_GE(e.good.size(), 1u);
    std::set<CandidateId> ids;
    for (const auto& g : e.good) ids.insert(g.id);
    for (const auto& b : e.bad) EXPECT_TRUE(ids.insert(b.id).second);
  }
}

TEST(Evidence, DeterministicForSeed) {
  const auto h = make_history(100);
  Rng a(42), b(42);
  EXPECT_EQ(build_evidence(ptrs(h), kSpecs, {10, 10}, a).ids(),
            build_evidence(ptrs(h), kSpecs, {10, 10}, b).ids());
}

TEST(Evidence, RenderedListsTextsAndFitness) {
  const auto h = make_history(6);
  Rng rng(3);
  const auto e = build_evidence(ptrs(h), kSpecs, {2, 2}, rng);
  for (const auto& g : e.good) EXPECT_NE(e.rendered.find(g.text), std::string::npos);
  for (const auto& b : e.bad) EXPECT_NE(e.rendered.find(b.text), std::string::npos);
}

TEST(Words, TruncateAndCount) {
  EXPECT_EQ(word_count("  one two\tthree\n"), 3u);
  EXPECT_EQ(truncate_words("a  b c d", 2), "a  b");
  EXPECT_EQ(truncate_words("a b", 5), "a b");
  std::string big;
  for (int i = 0; i < 5000; ++i) big += "word" + std::to_string(i) + " ";
  EXPECT_EQ(word_count(truncate_words(big, 500)), 500u);
}

TEST(Update, MockDigestBecomesMemo) {
  const auto h = make_history(10);
  Rng rng(1);
  const auto e = build_evidence(ptrs(h), kSpecs, {2, 2}, rng);
  EchoBackend echo("digest text");
  const auto out = update_experience(Experience{}, e, echo, 500);
  EXPECT_FALSE(out.skipped);
  EXPECT_EQ(out.experience.memo, "digest text");
  EXPECT_EQ(out.experience.version, 1u);
  EXPECT_EQ(out.experience.provenance, e.ids());
  EXPECT_EQ(echo.last.role, llm::BackendRole::summarizer);
  EXPECT_NE(echo.last.user.find(e.rendered), std::string::npos);
}

TEST(Update, PriorMemoInPromptAndCapApplied) {
  const auto h = make_history(10);
  Rng rng(1);
  const auto e = build_evidence(ptrs(h), kSpecs, {2, 2}, rng);
  std::string big;
  for (int i = 0; i < 5000; ++i) big += "w ";
  EchoBackend echo(big);
  Experience prior{"old insight about spacing", 4, {}};
  const auto out = update_experience(prior, e, echo, 500);
  EXPECT_EQ(word_count(out.experience.memo), 500u);
  EXPECT_EQ(out.experience.version, 5u);
  EXPECT_NE(echo.last.user.find("old insight about spacing"), std::string::npos);
}

TEST(Update, FailureKeepsPrior) {
  const auto h = make_history(4);
  Rng rng(1);
  const auto e = build_evidence(ptrs(h), kSpecs, {1, 1}, rng);
  FailingBackend failing;
  Experience prior{"keep me", 3, {7}};
  const auto out = update_experience(prior, e, failing, 500);
  EXPECT_TRUE(out.skipped);
  EXPECT_EQ(out.experience.memo, "keep me");
  EXPECT_EQ(out.experience.version, 3u);
}

TEST(Injection, ExactAtZeroAndOne) {
  Experience memo{"m", 1, {}};
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) EXPECT_FALSE(maybe_inject(memo, 0.0, rng).has_value());
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(maybe_inject(memo, 1.0, rng), "m");
}

TEST(Injection, EmptyMemoNeverInjectedButDrawConsumed) {
  Rng a(9), b(9);
  EXPECT_FALSE(maybe_inject(Experience{}, 1.0, a).has_value());
  b();
  EXPECT_EQ(a(), b());
}

TEST(Injection, HalfRateInBinomialBand) {
  Experience memo{"m", 1, {}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    int hits = 0;
    for (int i = 0; i < 1000; ++i) hits += maybe_inject(memo, 0.5, rng).has_value();
    // 450..550 is a +-3.16 sigma band around 500.
    EXPECT_GE(hits, 450);
    EXPECT_LE(hits, 550);
  }
}
