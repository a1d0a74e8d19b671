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

#include "llmevo/experience/experience.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace llmevo {

std::vector<CandidateId> EvidenceSet::ids() const {
  std::vector<CandidateId> out;
  for (const auto& g : good) out.push_back(g.id);
  for (const auto& b : bad) out.push_back(b.id);
  return out;
}

namespace {

EvidenceItem to_item(const Candidate& c) {
  EvidenceItem item;
  item.id = c.id;
  item.text = c.text;
  if (c.eval) {
    item.raw = c.eval->raw;
    item.normalized = c.eval->normalized;
    item.fitness = c.eval->fitness;
  }
  return item;
}

std::string render_item(const EvidenceItem& item, std::span<const ObjectiveSpec> specs) {
  std::string out = fmt::format("- id {} | F = {:.4f} |", item.id, item.fitness);
  for (std::size_t i = 0; i < specs.size() && i < item.raw.size(); ++i) {
    out += fmt::format(" {} = {:.4g}", specs[i].name, item.raw[i]);
    if (i < item.normalized.size()) out += fmt::format(" (normalized {:.3f})", item.normalized[i]);
    out += i + 1 < specs.size() ? ";" : "";
  }
  out += "\n";
  out += item.text;
  out += "\n";
  return out;
}

}  // namespace

EvidenceSet build_evidence(std::span<const Candidate* const> history,
                           std::span<const ObjectiveSpec> specs, const EvidenceOptions& options,
                           Rng& rng) {
  EvidenceSet out;
  const std::size_t n = history.size();
  if (n == 0) return out;

  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    if (history[a]->fitness() != history[b]->fitness()) {
      return history[a]->fitness() > history[b]->fitness();
    }
    return history[a]->id < history[b]->id;
  });

  std::size_t good = options.good_count;
  std::size_t bad = options.bad_count;
  const std::size_t wanted = good + bad;
  if (wanted > n) {
    good = static_cast<std::size_t>(std::floor(static_cast<double>(n) *
                                               static_cast<double>(options.good_count) /
                                               static_cast<double>(wanted)));
    if (good == 0 && options.good_count > 0) good = 1;
    bad = std::min(n - good, options.bad_count);
  }
  good = std::min(good, n);

  for (std::size_t i = 0; i < good; ++i) out.good.push_back(to_item(*history[rank[i]]));

  // Lower half: ranks [ceil(n/2), n), minus anything already in good.
  std::vector<std::size_t> lower;
  for (std::size_t r = std::max((n + 1) / 2, good); r < n; ++r) lower.push_back(rank[r]);
  bad = std::min(bad, lower.size());
  for (std::size_t k = 0; k < bad; ++k) {
    const auto pick = k + static_cast<std::size_t>(rng.below(lower.size() - k));
    std::swap(lower[k], lower[pick]);
  }
  lower.resize(bad);
  for (std::size_t idx : lower) out.bad.push_back(to_item(*history[idx]));

  std::string rendered = "Good candidates (highest fitness first):\n";
  for (const auto& g : out.good) rendered += render_item(g, specs);
  rendered += "\nPoor candidates (sampled from the lower half):\n";
  if (out.bad.empty()) rendered += "(none)\n";
  for (const auto& b : out.bad) rendered += render_item(b, specs);
  out.rendered = std::move(rendered);
  return out;
}

std::string_view summarizer_preamble() {
  return "You maintain a single short experience memo for an evolutionary optimizer. Merge the "
         "new evidence into the existing memo. Keep general, non-redundant insights: which "
         "traits the good candidates share, which mistakes the poor candidates make, which "
         "constraints bind most often. Overwrite anything the evidence contradicts or makes "
         "stale. Reply with the full updated memo only.";
}

llm::BackendRequest summarizer_request(const Experience& prior, const EvidenceSet& evidence,
                                       std::size_t word_cap) {
  llm::BackendRequest req;
  req.role = llm::BackendRole::summarizer;
  req.system = std::string(summarizer_preamble());
  req.user = fmt::format("## Current memo (version {})\n{}\n\n## New evidence\n{}\n## Limit\n"
                         "At most {} words.\n",
                         prior.version, prior.memo.empty() ? "(empty)" : prior.memo,
                         evidence.rendered, word_cap);
  for (const auto& g : evidence.good) req.good_ids.push_back(g.id);
  for (const auto& b : evidence.bad) req.bad_ids.push_back(b.id);
  return req;
}

std::size_t word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

std::string truncate_words(std::string_view text, std::size_t word_cap) {
  std::size_t count = 0;
  bool in_word = false;
  std::size_t end = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const bool space = std::isspace(static_cast<unsigned char>(text[i])) != 0;
    if (!space && !in_word) {
      if (count == word_cap) break;
      ++count;
    }
    in_word = !space;
    if (!space) end = i + 1;
  }
  if (word_cap == 0) return {};
  // Drop leading whitespace too.
  std::size_t begin = 0;
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  return std::string(text.substr(begin, end - begin));
}

UpdateOutcome update_experience(const Experience& prior, const EvidenceSet& evidence,
                                llm::Backend& backend, std::size_t word_cap) {
  UpdateOutcome out;
  out.request = summarizer_request(prior, evidence, word_cap);
  out.experience = prior;
  try {
    auto reply = backend.complete(out.request);
    out.experience.memo = truncate_words(reply.raw_text, word_cap);
    out.experience.version = prior.version + 1;
    out.experience.provenance = evidence.ids();
    out.reply = std::move(reply);
  } catch (const llm::BackendError& e) {
    out.skipped = true;
    out.error = e.what();
  }
  return out;
}

std::optional<std::string> maybe_inject(const Experience& experience, double p_exp, Rng& rng) {
  const bool draw = rng.bernoulli(p_exp);
  if (!draw || experience.memo.empty()) return std::nullopt;
  return experience.memo;
}

}  // namespace llmevo
