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

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "llmevo/metrics/metrics.hpp"

namespace llmevo {

/// Append-only JSONL event stream. Each record carries a sequence number and
/// an "event" type; keys are sorted so equal runs produce equal bytes.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::ostream* out) : out_(out) {}

  void emit(std::string_view type, nlohmann::json fields = nlohmann::json::object());

  /// Extra observer (e.g. progress printing or tests).
  void set_listener(std::function<void(const nlohmann::json&)> listener) {
    listener_ = std::move(listener);
  }

  std::size_t count() const noexcept { return seq_; }

 private:
  std::ostream* out_ = nullptr;
  std::function<void(const nlohmann::json&)> listener_;
  std::size_t seq_ = 0;
};

/// FNV-1a of the text, as 16 hex digits.
std::string text_hash(std::string_view text);

/// Snapshot as carried by generation_end events (absent values are null).
nlohmann::json snapshot_to_json(const metrics::MetricSnapshot& s);
/// Throws nlohmann::json::exception on missing or mistyped fields.
metrics::MetricSnapshot snapshot_from_json(const nlohmann::json& j);

}  // namespace llmevo
