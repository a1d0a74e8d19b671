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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llmevo/core/candidate.hpp"
#include "llmevo/objective/adapter.hpp"

namespace llmevo::llm {

inline constexpr std::string_view kOpenTag = "<candidate>";
inline constexpr std::string_view kCloseTag = "</candidate>";

struct ObjectiveDescription {
  std::string name;
  std::string prose;
};

/// The five-part task template a problem supplies.
struct TaskTemplate {
  std::string task_description;
  /// Must show the candidate tag convention.
  std::string output_format;
  std::string mutation_instruction;
  std::string crossover_instruction;
  std::string additional_requirements;
  std::vector<ObjectiveDescription> objective_descriptions;

  /// Throws ConfigError when the output format lacks the candidate tags or
  /// an objective description names an unknown objective.
  void validate(std::span<const ObjectiveSpec> specs) const;
};

struct ParentContext {
  CandidateId id = 0;
  std::string text;
  /// Formatted feedback block (raw objectives, constraints, notes).
  std::string feedback;
};

struct PromptBundle {
  std::string system_preamble;
  std::string body;
  std::vector<ParentContext> parents;
  std::optional<std::string> experience_block;
  std::size_t k_request = 1;
  JobKind kind = JobKind::mutation;
};

std::string_view optimizer_preamble();

/// Assembles a variation prompt. Section order: task description, objectives,
/// parents, the instruction for `kind`, additional requirements, experience
/// (when given), output format asking for exactly k tagged candidates.
PromptBundle build_prompt(const TaskTemplate& tmpl, std::span<const ObjectiveSpec> specs,
                          JobKind kind, std::vector<ParentContext> parents,
                          std::optional<std::string> experience, std::size_t k);

struct ParseResult {
  std::vector<std::string> candidates;
  std::vector<std::string> diagnostics;
};

/// Extracts every well-formed <candidate>...</candidate> pair in document
/// order, trimmed. Never throws; count mismatches against k_expected,
/// unterminated or nested tags, and empty bodies are reported as diagnostics.
ParseResult parse_candidates(std::string_view reply, std::size_t k_expected);

}  // namespace llmevo::llm
