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
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "llmevo/core/errors.hpp"
#include "llmevo/llm/backend.hpp"

namespace llmevo::llm {

std::vector<CallOutcome> dispatch(Backend& backend, std::span<const BackendRequest> requests,
                                  std::size_t parallelism) {
  std::vector<CallOutcome> outcomes(requests.size());
  std::vector<std::exception_ptr> fatal(requests.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= requests.size()) return;
      try {
        outcomes[i].reply = backend.complete(requests[i]);
        outcomes[i].attempts = outcomes[i].reply->attempts;
      } catch (const BackendError& e) {
        outcomes[i].error = e.what();
        outcomes[i].attempts = e.attempts();
      } catch (const FatalError&) {
        fatal[i] = std::current_exception();
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(1, requests.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : fatal) {
    if (f) std::rethrow_exception(f);
  }
  return outcomes;
}

}  // namespace llmevo::llm
