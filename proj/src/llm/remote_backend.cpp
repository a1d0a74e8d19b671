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
#include <cmath>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "llmevo/core/errors.hpp"
#include "llmevo/llm/backend.hpp"

namespace llmevo::llm {

std::chrono::milliseconds RetryPolicy::delay_after(std::size_t attempt) const {
  const double scaled = static_cast<double>(base_delay.count()) *
                        std::pow(multiplier, static_cast<double>(attempt > 0 ? attempt - 1 : 0));
  const double capped = std::min(scaled, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

RemoteBackend::RemoteBackend(RemoteOptions options, Sleeper sleeper)
    : options_(std::move(options)), sleeper_(std::move(sleeper)) {
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  const auto scheme_end = options_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError(fmt::format("backend.base_url '{}' needs an http:// or https:// scheme",
                                  options_.base_url));
  }
  const auto path_start = options_.base_url.find('/', scheme_end + 3);
  host_ = options_.base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : options_.base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (options_.retry.attempts == 0) throw ConfigError("backend.retry_attempts must be >= 1");
}

RemoteBackend::~RemoteBackend() = default;

BackendReply RemoteBackend::complete(const BackendRequest& request) {
  nlohmann::json payload = {
      {"model", options_.model},
      {"temperature", options_.temperature},
      {"max_tokens", options_.max_tokens},
      {"messages",
       nlohmann::json::array({{{"role", "system"}, {"content", request.system}},
                              {{"role", "user"}, {"content", request.user}}})},
  };
  const std::string body = payload.dump();
  const std::string path = path_prefix_ + "/chat/completions";
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }

  const auto start = std::chrono::steady_clock::now();
  std::string last_error;
  for (std::size_t attempt = 1; attempt <= options_.retry.attempts; ++attempt) {
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    auto res = client.Post(path, headers, body, "application/json");

    bool retryable = false;
    if (!res) {
      last_error = fmt::format("transport error: {}", httplib::to_string(res.error()));
      retryable = true;
    } else if (res->status == 401 || res->status == 403) {
      throw FatalError(fmt::format(
          "backend rejected credentials (HTTP {}); set a valid key in ${}", res->status,
          options_.api_key_env));
    } else if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      retryable = true;
    } else if (res->status != 200) {
      throw BackendError(fmt::format("HTTP {}: {}", res->status, res->body.substr(0, 200)),
                         attempt);
    } else {
      BackendReply reply;
      try {
        const auto json = nlohmann::json::parse(res->body);
        reply.raw_text = json.at("choices").at(0).at("message").at("content").get<std::string>();
        if (json.contains("usage") && json["usage"].is_object()) {
          const auto& usage = json["usage"];
          if (usage.contains("prompt_tokens")) {
            reply.usage.input_tokens = usage["prompt_tokens"].get<std::uint64_t>();
          }
          if (usage.contains("completion_tokens")) {
            reply.usage.output_tokens = usage["completion_tokens"].get<std::uint64_t>();
          }
        }
      } catch (const nlohmann::json::exception& e) {
        throw BackendError(fmt::format("malformed completion response: {}", e.what()), attempt);
      }
      reply.attempts = attempt;
      reply.latency_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
      return reply;
    }
    if (retryable && attempt < options_.retry.attempts) {
      sleeper_(options_.retry.delay_after(attempt));
    }
  }
  throw BackendError(fmt::format("retries exhausted after {} attempts ({})",
                                 options_.retry.attempts, last_error),
                     options_.retry.attempts);
}

}  // namespace llmevo::llm
