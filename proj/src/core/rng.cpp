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

#include "llmevo/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace llmevo {

double Rng::normal() noexcept {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view to_string(Stream s) noexcept {
  switch (s) {
    case Stream::pairing: return "pairing";
    case Stream::injection: return "injection";
    case Stream::selection: return "selection";
    case Stream::mock_backend: return "mock_backend";
    case Stream::evidence: return "evidence";
    case Stream::seeds: return "seeds";
    case Stream::metrics: return "metrics";
  }
  return "unknown";
}

RngStreams::RngStreams(std::uint64_t run_seed) : run_seed_(run_seed) {
  for (std::size_t i = 0; i < kStreamCount; ++i) {
    streams_[i].reseed(seed_of(static_cast<Stream>(i)));
  }
}

std::uint64_t RngStreams::seed_of(Stream s) const noexcept {
  return derive_seed(run_seed_, to_string(s));
}

}  // namespace llmevo
