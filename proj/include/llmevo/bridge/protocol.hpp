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

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "llmevo/objective/adapter.hpp"

namespace llmevo::bridge {

inline constexpr int kProtocolVersion = 1;

/// Malformed or mismatched record from a worker. The worker is quarantined.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First line a worker prints:
///   {"protocol": 1,
///    "objectives": [{"name": "qed", "direction": "maximize", "bounds": [0, 1]}],
///    "constraints": [{"name": "sim", "comparator": ">=", "threshold": 0.4}]}
struct Handshake {
  int protocol = kProtocolVersion;
  std::vector<ObjectiveSpec> objectives;
  std::vector<ConstraintSpec> constraints;
};

Handshake parse_handshake(std::string_view line);
std::string encode_handshake(const Handshake& handshake);

struct WorkerResult {
  bool valid = false;
  /// Name/value pairs, sorted by name.
  std::vector<std::pair<std::string, double>> objectives;
  std::vector<std::pair<std::string, double>> constraints;
  std::optional<std::string> feedback;
};

std::string encode_request(std::string_view id, std::span<const std::string> candidates);

/// Parses a response and checks that its id equals `expected_id` and that it
/// carries exactly `expected_count` results. Non-finite numbers are accepted
/// here (JSON cannot carry them anyway except as null, which maps to NaN) and
/// left for the caller to judge.
std::vector<WorkerResult> parse_response(std::string_view line, std::string_view expected_id,
                                         std::size_t expected_count);

std::string encode_response(std::string_view id, std::span<const WorkerResult> results);

/// Maps a worker result onto the declared specs. Missing or non-finite
/// objectives make the candidate invalid with a reason.
RawEvaluation to_raw_evaluation(const WorkerResult& result, const Handshake& specs);

}  // namespace llmevo::bridge
