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

#include "llmevo/core/events.hpp"

#include <fmt/format.h>

#include "llmevo/core/rng.hpp"

namespace llmevo {

void EventLog::emit(std::string_view type, nlohmann::json fields) {
  fields["event"] = std::string(type);
  fields["seq"] = seq_++;
  if (out_) {
    *out_ << fields.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
  if (listener_) listener_(fields);
}

std::string text_hash(std::string_view text) { return fmt::format("{:016x}", fnv1a64(text)); }

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

nlohmann::json snapshot_to_json(const metrics::MetricSnapshot& s) {
  return {{"generation", s.generation},
          {"consumed", s.consumed},
          {"top1_f", optional_number(s.top1_f)},
          {"top10_f", optional_number(s.top10_f)},
          {"auc_top10", s.auc_top10},
          {"hypervolume", s.hypervolume},
          {"uniqueness", optional_number(s.uniqueness)},
          {"validity", optional_number(s.validity)},
          {"diversity", optional_number(s.diversity)}};
}

metrics::MetricSnapshot snapshot_from_json(const nlohmann::json& j) {
  metrics::MetricSnapshot s;
  s.generation = j.at("generation").get<std::size_t>();
  s.consumed = j.at("consumed").get<std::size_t>();
  s.top1_f = optional_field(j, "top1_f");
  s.top10_f = optional_field(j, "top10_f");
  s.auc_top10 = j.at("auc_top10").get<double>();
  s.hypervolume = j.at("hypervolume").get<double>();
  s.uniqueness = optional_field(j, "uniqueness");
  s.validity = optional_field(j, "validity");
  s.diversity = optional_field(j, "diversity");
  return s;
}

}  // namespace llmevo
