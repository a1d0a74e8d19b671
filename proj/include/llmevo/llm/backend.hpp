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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "llmevo/core/candidate.hpp"
#include "llmevo/core/rng.hpp"

namespace llmevo::llm {

enum class BackendRole { optimizer, summarizer };

std::string_view to_string(BackendRole r) noexcept;

struct BackendRequest {
  BackendRole role = BackendRole::optimizer;
  std::string system;
  std::string user;
  std::size_t job_index = 0;
  // Structured context. Remote backends only send the messages; the mock uses
  // these to produce domain-legal replies.
  JobKind kind = JobKind::mutation;
  std::size_t k = 1;
  std::vector<std::string> parent_texts;
  std::vector<CandidateId> good_ids;
  std::vector<CandidateId> bad_ids;
};

struct TokenUsage {
  std::optional<std::uint64_t> input_tokens;
  std::optional<std::uint64_t> output_tokens;
};

struct BackendReply {
  std::string raw_text;
  TokenUsage usage;
  double latency_ms = 0.0;
  std::size_t attempts = 1;
};

/// A call that did not produce a reply. The run continues; the job is marked
/// failed. Authentication problems are raised as FatalError instead.
class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& what, std::size_t attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  std::size_t attempts_;
};

/// Chat-completion style backend. Implementations must tolerate concurrent
/// calls to complete().
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string_view name() const noexcept = 0;
  virtual BackendReply complete(const BackendRequest& request) = 0;
};

using VariationFn =
    std::function<std::string(std::span<const std::string> parents, JobKind kind, Rng& rng)>;

struct MockOptions {
  std::uint64_t seed = 0;
  /// Probability that a proposed candidate is replaced by undecodable text.
  double invalid_rate = 0.0;
  /// Probability that a whole call fails (transient error).
  double failure_rate = 0.0;
  /// When set, every summarizer call fails.
  bool fail_summarizer = false;
};

/// Network-free backend. The reply is a pure function of (seed, system,
/// user): optimizer calls perturb the parent payloads through the problem's
/// variation function; summarizer calls return a fixed-format digest of the
/// evidence ids.
class MockBackend final : public Backend {
 public:
  MockBackend(MockOptions options, VariationFn variation);

  std::string_view name() const noexcept override { return "mock"; }
  BackendReply complete(const BackendRequest& request) override;

 private:
  MockOptions options_;
  VariationFn variation_;
};

struct RetryPolicy {
  std::size_t attempts = 4;
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{30'000};

  /// Delay before attempt `attempt + 1` (attempt counts from 1).
  std::chrono::milliseconds delay_after(std::size_t attempt) const;
};

struct RemoteOptions {
  /// e.g. "https://api.openai.com/v1"; "/chat/completions" is appended.
  std::string base_url;
  std::string model;
  double temperature = 1.0;
  std::size_t max_tokens = 4096;
  std::string api_key;
  std::string api_key_env = "LLMEVO_API_KEY";
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// OpenAI-compatible chat-completion client. Retries transport failures, 429
/// and 5xx with exponential backoff; 401/403 raise FatalError.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(RemoteOptions options, Sleeper sleeper = {});
  ~RemoteBackend() override;

  std::string_view name() const noexcept override { return "remote"; }
  BackendReply complete(const BackendRequest& request) override;

 private:
  RemoteOptions options_;
  Sleeper sleeper_;
  std::string host_;
  std::string path_prefix_;
};

struct CallOutcome {
  std::optional<BackendReply> reply;
  std::string error;
  std::size_t attempts = 0;
};

/// Runs requests with at most `parallelism` in flight. Outcomes are returned
/// in request order. A FatalError from any call is rethrown after all
/// in-flight calls finish.
std::vector<CallOutcome> dispatch(Backend& backend, std::span<const BackendRequest> requests,
                                  std::size_t parallelism);

/// Rough token estimate (bytes / 4, rounded up) for backends without usage.
std::uint64_t estimate_tokens(std::string_view text) noexcept;

}  // namespace llmevo::llm
