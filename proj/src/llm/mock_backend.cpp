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

#include <fmt/format.h>

#include "llmevo/llm/backend.hpp"
#include "llmevo/llm/prompt.hpp"

namespace llmevo::llm {

std::string_view to_string(BackendRole r) noexcept {
  return r == BackendRole::optimizer ? "optimizer" : "summarizer";
}

std::uint64_t estimate_tokens(std::string_view text) noexcept { return (text.size() + 3) / 4; }

MockBackend::MockBackend(MockOptions options, VariationFn variation)
    : options_(options), variation_(std::move(variation)) {}

BackendReply MockBackend::complete(const BackendRequest& request) {
  Rng rng(derive_seed(options_.seed, fnv1a64(request.user, fnv1a64(request.system))));
  if (request.role == BackendRole::summarizer) {
    if (options_.fail_summarizer) throw BackendError("mock summarizer failure", 1);
    std::string digest = "Digest of evidence.";
    const auto list = [](const std::vector<CandidateId>& ids) {
      std::string s;
      for (auto id : ids) s += fmt::format("{}{}", s.empty() ? "" : ", ", id);
      return s.empty() ? std::string("none") : s;
    };
    digest += fmt::format(" Good candidates: {}.", list(request.good_ids));
    digest += fmt::format(" Poor candidates: {}.", list(request.bad_ids));
    digest += " Keep the traits shared by the good candidates and avoid those of the poor ones.";
    BackendReply reply;
    reply.raw_text = std::move(digest);
    reply.usage = {estimate_tokens(request.system) + estimate_tokens(request.user),
                   estimate_tokens(reply.raw_text)};
    return reply;
  }

  if (options_.failure_rate > 0.0 && rng.bernoulli(options_.failure_rate)) {
    throw BackendError("mock transient failure", 1);
  }
  std::string text;
  for (std::size_t i = 0; i < request.k; ++i) {
    std::string body;
    if (options_.invalid_rate > 0.0 && rng.bernoulli(options_.invalid_rate)) {
      body = "(malformed proposal)";
    } else if (variation_ && !request.parent_texts.empty()) {
      body = variation_(request.parent_texts, request.kind, rng);
    } else {
      body = request.parent_texts.empty() ? std::string("?") : request.parent_texts.front();
    }
    text += fmt::format("Candidate {}:\n{}\n{}\n{}\n", i + 1, kOpenTag, body, kCloseTag);
  }
  BackendReply reply;
  reply.raw_text = std::move(text);
  reply.usage = {estimate_tokens(request.system) + estimate_tokens(request.user),
                 estimate_tokens(reply.raw_text)};
  return reply;
}

}  // namespace llmevo::llm
