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

#include "llmevo/llm/prompt.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "llmevo/core/errors.hpp"

namespace llmevo {

std::string_view to_string(JobKind k) noexcept {
  return k == JobKind::mutation ? "mutation" : "crossover";
}

}  // namespace llmevo

namespace llmevo::llm {

void TaskTemplate::validate(std::span<const ObjectiveSpec> specs) const {
  std::vector<std::string> errors;
  if (output_format.find(kOpenTag) == std::string::npos ||
      output_format.find(kCloseTag) == std::string::npos) {
    errors.emplace_back(fmt::format("template.output_format must contain {} and {}", kOpenTag,
                                    kCloseTag));
  }
  for (const auto& d : objective_descriptions) {
    const bool known = std::any_of(specs.begin(), specs.end(),
                                   [&](const ObjectiveSpec& s) { return s.name == d.name; });
    if (!known) {
      errors.emplace_back(
          fmt::format("template objective '{}' does not match any declared objective", d.name));
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::string_view optimizer_preamble() {
  return "You are an optimizer in an evolutionary search. You read parent candidates with "
         "their evaluation feedback and propose improved offspring. Follow the output "
         "format exactly.";
}

PromptBundle build_prompt(const TaskTemplate& tmpl, std::span<const ObjectiveSpec> specs,
                          JobKind kind, std::vector<ParentContext> parents,
                          std::optional<std::string> experience, std::size_t k) {
  PromptBundle bundle;
  bundle.system_preamble = std::string(optimizer_preamble());
  bundle.kind = kind;
  bundle.k_request = k;

  std::string body;
  body += "## Task description\n";
  body += tmpl.task_description;
  body += "\n\n## Objectives\n";
  for (const auto& spec : specs) {
    body += fmt::format("- {} ({})", spec.name, to_string(spec.direction));
    auto it = std::find_if(tmpl.objective_descriptions.begin(), tmpl.objective_descriptions.end(),
                           [&](const ObjectiveDescription& d) { return d.name == spec.name; });
    if (it != tmpl.objective_descriptions.end() && !it->prose.empty()) {
      body += ": ";
      body += it->prose;
    } else if (spec.source == ObjectiveSource::promoted_constraint) {
      body += ": constraint violation margin, 0 when satisfied";
    }
    body += '\n';
  }
  for (std::size_t i = 0; i < parents.size(); ++i) {
    body += fmt::format("\n## Parent {}\n", i + 1);
    body += kOpenTag;
    body += '\n';
    body += parents[i].text;
    body += '\n';
    body += kCloseTag;
    body += "\nEvaluation:\n";
    body += parents[i].feedback;
  }
  if (kind == JobKind::mutation) {
    body += "\n## Mutation instruction\n";
    body += tmpl.mutation_instruction.empty() ? "Propose variations of the parent."
                                              : tmpl.mutation_instruction;
  } else {
    body += "\n## Crossover instruction\n";
    body += tmpl.crossover_instruction.empty()
                ? "Combine the strengths of both parents."
                : tmpl.crossover_instruction;
  }
  body += "\n\n## Additional requirements\n";
  body += tmpl.additional_requirements.empty() ? "None." : tmpl.additional_requirements;
  if (experience) {
    body += "\n\n## Experience from previous generations\n";
    body += *experience;
  }
  body += "\n\n## Output format\n";
  body += tmpl.output_format;
  body += fmt::format("\nPropose exactly {} new candidate{}, each wrapped in {} and {}.\n", k,
                      k == 1 ? "" : "s", kOpenTag, kCloseTag);

  bundle.body = std::move(body);
  bundle.parents = std::move(parents);
  bundle.experience_block = std::move(experience);
  return bundle;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ParseResult parse_candidates(std::string_view reply, std::size_t k_expected) {
  ParseResult out;
  std::size_t pos = 0;
  while (true) {
    const auto open = reply.find(kOpenTag, pos);
    if (open == std::string_view::npos) break;
    const auto body_start = open + kOpenTag.size();
    const auto close = reply.find(kCloseTag, body_start);
    if (close == std::string_view::npos) {
      out.diagnostics.push_back(fmt::format("unterminated candidate tag at byte {}", open));
      break;
    }
    const auto nested = reply.find(kOpenTag, body_start);
    if (nested != std::string_view::npos && nested < close) {
      out.diagnostics.push_back(
          fmt::format("nested candidate tag at byte {}; outer tag at {} dropped", nested, open));
      pos = nested;
      continue;
    }
    const auto text = trim(reply.substr(body_start, close - body_start));
    if (text.empty()) {
      out.diagnostics.push_back(fmt::format("empty candidate at byte {}", open));
    } else {
      out.candidates.emplace_back(text);
    }
    pos = close + kCloseTag.size();
  }
  if (out.candidates.size() != k_expected) {
    // One record per reply defect; a count mismatch caused by a malformed tag
    // is reported on that tag's line.
    auto count = fmt::format("expected {} candidates, found {}", k_expected,
                             out.candidates.size());
    if (out.diagnostics.empty()) {
      out.diagnostics.push_back(std::move(count));
    } else {
      out.diagnostics.back() += "; " + count;
    }
  }
  return out;
}

}  // namespace llmevo::llm
