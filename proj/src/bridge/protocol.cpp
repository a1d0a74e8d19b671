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

#include "llmevo/bridge/protocol.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace llmevo::bridge {

using nlohmann::json;

namespace {

json parse_line(std::string_view line, std::string_view what) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError(fmt::format("{} is not a JSON object", what));
  }
  return j;
}

double number_or_nan(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  throw ProtocolError("expected a number");
}

std::vector<std::pair<std::string, double>> named_values(const json& j, const std::string& field) {
  std::vector<std::pair<std::string, double>> out;
  if (!j.contains(field)) return out;
  const auto& obj = j.at(field);
  if (!obj.is_object()) throw ProtocolError(fmt::format("'{}' must be an object", field));
  for (const auto& [name, value] : obj.items()) out.emplace_back(name, number_or_nan(value));
  return out;
}

ObjectiveSpec objective_from_json(const json& o) {
  if (!o.is_object() || !o.contains("name") || !o.at("name").is_string()) {
    throw ProtocolError("objective entry needs a string 'name'");
  }
  ObjectiveSpec spec;
  spec.name = o.at("name").get<std::string>();
  const auto dir = o.value("direction", std::string("maximize"));
  const auto parsed = parse_direction(dir);
  if (!parsed) throw ProtocolError(fmt::format("objective {}: bad direction '{}'", spec.name, dir));
  spec.direction = *parsed;
  if (o.contains("bounds") && !o.at("bounds").is_null()) {
    const auto& b = o.at("bounds");
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
      throw ProtocolError(fmt::format("objective {}: bounds must be [lo, hi]", spec.name));
    }
    spec.bounds = Bounds{b[0].get<double>(), b[1].get<double>()};
    if (!(spec.bounds->lo < spec.bounds->hi)) {
      throw ProtocolError(fmt::format("objective {}: bounds need lo < hi", spec.name));
    }
  }
  spec.weight = o.value("weight", 1.0);
  return spec;
}

ConstraintSpec constraint_from_json(const json& c) {
  if (!c.is_object() || !c.contains("name") || !c.at("name").is_string()) {
    throw ProtocolError("constraint entry needs a string 'name'");
  }
  ConstraintSpec spec;
  spec.name = c.at("name").get<std::string>();
  const auto cmp = c.value("comparator", std::string("<="));
  const auto parsed = parse_comparator(cmp);
  if (!parsed) throw ProtocolError(fmt::format("constraint {}: bad comparator '{}'", spec.name, cmp));
  spec.comparator = *parsed;
  if (!c.contains("threshold") || !c.at("threshold").is_number()) {
    throw ProtocolError(fmt::format("constraint {}: numeric 'threshold' required", spec.name));
  }
  spec.threshold = c.at("threshold").get<double>();
  const auto sev = c.value("severity", std::string("hard"));
  const auto severity = parse_severity(sev);
  if (!severity) throw ProtocolError(fmt::format("constraint {}: bad severity '{}'", spec.name, sev));
  spec.severity = *severity;
  spec.promote = c.value("promote", false);
  spec.margin_scale = c.value("margin_scale", 1.0);
  if (c.contains("tolerance") && c.at("tolerance").is_number()) {
    spec.tolerance = c.at("tolerance").get<double>();
  }
  return spec;
}

}  // namespace

Handshake parse_handshake(std::string_view line) {
  const json j = parse_line(line, "handshake");
  if (!j.contains("protocol") || !j.at("protocol").is_number_integer()) {
    throw ProtocolError("handshake lacks an integer 'protocol'");
  }
  Handshake h;
  h.protocol = j.at("protocol").get<int>();
  if (h.protocol != kProtocolVersion) {
    throw ProtocolError(fmt::format("unsupported protocol version {} (expected {})", h.protocol,
                                    kProtocolVersion));
  }
  if (!j.contains("objectives") || !j.at("objectives").is_array() || j.at("objectives").empty()) {
    throw ProtocolError("handshake must declare at least one objective");
  }
  for (const auto& o : j.at("objectives")) h.objectives.push_back(objective_from_json(o));
  if (j.contains("constraints")) {
    if (!j.at("constraints").is_array()) throw ProtocolError("'constraints' must be an array");
    for (const auto& c : j.at("constraints")) h.constraints.push_back(constraint_from_json(c));
  }
  return h;
}

std::string encode_handshake(const Handshake& handshake) {
  json j;
  j["protocol"] = handshake.protocol;
  j["objectives"] = json::array();
  for (const auto& o : handshake.objectives) {
    json e{{"name", o.name}, {"direction", std::string(to_string(o.direction))}, {"weight", o.weight}};
    if (o.bounds) e["bounds"] = {o.bounds->lo, o.bounds->hi};
    j["objectives"].push_back(e);
  }
  j["constraints"] = json::array();
  for (const auto& c : handshake.constraints) {
    json e{{"name", c.name},
           {"comparator", std::string(to_string(c.comparator))},
           {"threshold", c.threshold},
           {"severity", std::string(to_string(c.severity))},
           {"promote", c.promote},
           {"margin_scale", c.margin_scale}};
    if (c.tolerance) e["tolerance"] = *c.tolerance;
    j["constraints"].push_back(e);
  }
  return j.dump();
}

std::string encode_request(std::string_view id, std::span<const std::string> candidates) {
  json j;
  j["id"] = std::string(id);
  j["candidates"] = json::array();
  for (const auto& c : candidates) j["candidates"].push_back(c);
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::vector<WorkerResult> parse_response(std::string_view line, std::string_view expected_id,
                                         std::size_t expected_count) {
  const json j = parse_line(line, "response");
  if (!j.contains("id") || !j.at("id").is_string()) throw ProtocolError("response lacks a string 'id'");
  const auto id = j.at("id").get<std::string>();
  if (id != expected_id) {
    throw ProtocolError(fmt::format("response id '{}' does not match request '{}'", id, expected_id));
  }
  if (!j.contains("results") || !j.at("results").is_array()) {
    throw ProtocolError("response lacks a 'results' array");
  }
  const auto& results = j.at("results");
  if (results.size() != expected_count) {
    throw ProtocolError(fmt::format("response carries {} results for {} candidates",
                                    results.size(), expected_count));
  }
  std::vector<WorkerResult> out;
  out.reserve(results.size());
  for (const auto& r : results) {
    if (!r.is_object() || !r.contains("valid") || !r.at("valid").is_boolean()) {
      throw ProtocolError("result entry needs a boolean 'valid'");
    }
    WorkerResult w;
    w.valid = r.at("valid").get<bool>();
    w.objectives = named_values(r, "objectives");
    w.constraints = named_values(r, "constraints");
    if (r.contains("feedback") && r.at("feedback").is_string()) {
      w.feedback = r.at("feedback").get<std::string>();
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::string encode_response(std::string_view id, std::span<const WorkerResult> results) {
  json j;
  j["id"] = std::string(id);
  j["results"] = json::array();
  for (const auto& r : results) {
    json e{{"valid", r.valid}, {"objectives", json::object()}, {"constraints", json::object()}};
    for (const auto& [k, v] : r.objectives) e["objectives"][k] = v;
    for (const auto& [k, v] : r.constraints) e["constraints"][k] = v;
    if (r.feedback) e["feedback"] = *r.feedback;
    j["results"].push_back(e);
  }
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

RawEvaluation to_raw_evaluation(const WorkerResult& result, const Handshake& specs) {
  RawEvaluation raw;
  raw.feedback = result.feedback;
  if (!result.valid) {
    raw.valid = false;
    raw.invalid_reason = result.feedback.value_or("rejected by the evaluator");
    return raw;
  }
  const auto find = [](const auto& values, const std::string& name) -> std::optional<double> {
    for (const auto& [k, v] : values) {
      if (k == name) return v;
    }
    return std::nullopt;
  };
  for (const auto& spec : specs.objectives) {
    const auto v = find(result.objectives, spec.name);
    if (!v) {
      raw.valid = false;
      raw.invalid_reason = fmt::format("missing objective '{}'", spec.name);
      return raw;
    }
    if (!std::isfinite(*v)) {
      raw.valid = false;
      raw.invalid_reason = fmt::format("non-finite objective '{}'", spec.name);
      return raw;
    }
    raw.objectives.push_back(*v);
  }
  for (const auto& spec : specs.constraints) {
    const auto v = find(result.constraints, spec.name);
    if (!v || !std::isfinite(*v)) {
      raw.valid = false;
      raw.invalid_reason = fmt::format("missing or non-finite constraint '{}'", spec.name);
      return raw;
    }
    raw.constraints.push_back(measure(spec, *v));
  }
  return raw;
}

}  // namespace llmevo::bridge
