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

#include "llmevo/bridge/conformance.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace llmevo::bridge {

namespace {

bool same_result(const WorkerResult& a, const WorkerResult& b) {
  return a.valid == b.valid && a.objectives == b.objectives && a.constraints == b.constraints &&
         a.feedback == b.feedback;
}

class Runner {
 public:
  Runner(ExternalWorker& worker, ConformanceReport& report) : worker_(worker), report_(report) {}

  std::optional<std::vector<WorkerResult>> send(const std::string& check,
                                                std::vector<std::string> batch) {
    auto out = worker_.evaluate(batch);
    if (!out.ok) {
      fail(check, out.error, out.error.starts_with("protocol") ? "protocol" : "worker unavailable");
      return std::nullopt;
    }
    inspect_values(check, out.results);
    return std::move(out.results);
  }

  void pass(const std::string& check) { report_.checks.push_back({check, true, {}}); }

  void fail(const std::string& check, const std::string& detail, const std::string& violation) {
    report_.checks.push_back({check, false, detail});
    if (std::find(report_.violations.begin(), report_.violations.end(), violation) ==
        report_.violations.end()) {
      report_.violations.push_back(violation);
    }
  }

 private:
  void inspect_values(const std::string& check, const std::vector<WorkerResult>& results) {
    for (const auto& r : results) {
      if (!r.valid) continue;
      for (const auto& spec : worker_.handshake().objectives) {
        const auto it = std::find_if(r.objectives.begin(), r.objectives.end(),
                                     [&](const auto& kv) { return kv.first == spec.name; });
        if (it == r.objectives.end()) {
          fail(check, fmt::format("objective '{}' missing from a valid result", spec.name),
               "missing objective");
          return;
        }
        if (!std::isfinite(it->second)) {
          fail(check, fmt::format("objective '{}' is not finite", spec.name),
               "non-finite objective");
          return;
        }
      }
    }
  }

  ExternalWorker& worker_;
  ConformanceReport& report_;
};

}  // namespace

ConformanceReport conformance_suite(ExternalWorker& worker, const ConformanceOptions& options) {
  ConformanceReport report;
  Runner run(worker, report);
  if (worker.state() != WorkerState::ready) {
    run.fail("ready", fmt::format("worker is {}", to_string(worker.state())), "worker unavailable");
    return report;
  }

  const auto checked = [&](const std::string& check, std::vector<std::string> batch,
                           auto&& verify) {
    if (worker.state() != WorkerState::ready) {
      run.fail(check, "worker no longer ready", "worker unavailable");
      return;
    }
    const auto failures = report.violations.size();
    auto results = run.send(check, std::move(batch));
    if (!results || report.violations.size() != failures) return;
    verify(*results);
  };

  checked("empty batch", {}, [&](const std::vector<WorkerResult>&) { run.pass("empty batch"); });

  checked("duplicates", {options.valid_probe, options.valid_probe},
          [&](const std::vector<WorkerResult>& r) {
            if (same_result(r[0], r[1])) {
              run.pass("duplicates");
            } else {
              run.fail("duplicates", "identical candidates in one batch got different results",
                       "determinism");
            }
          });

  checked("undecodable", {options.invalid_probe}, [&](const std::vector<WorkerResult>& r) {
    if (!r[0].valid) {
      run.pass("undecodable");
    } else {
      run.fail("undecodable", fmt::format("'{}' was accepted", options.invalid_probe),
               "invalid rejected");
    }
  });

  std::vector<std::string> large;
  for (std::size_t i = 0; i < options.large_batch; ++i) {
    large.push_back(i % 2 == 0 ? options.valid_probe : options.invalid_probe);
  }
  checked("large batch", large, [&](const std::vector<WorkerResult>& r) {
    for (std::size_t i = 2; i < r.size(); ++i) {
      if (!same_result(r[i], r[i % 2])) {
        run.fail("large batch", fmt::format("result {} differs from an identical candidate", i),
                 "determinism");
        return;
      }
    }
    run.pass("large batch");
  });

  std::optional<WorkerResult> first;
  checked("determinism", {options.valid_probe},
          [&](const std::vector<WorkerResult>& r) { first = r[0]; });
  if (first) {
    checked("determinism", {options.valid_probe}, [&](const std::vector<WorkerResult>& r) {
      if (same_result(*first, r[0])) {
        run.pass("determinism");
      } else {
        run.fail("determinism", "repeated request gave a different result", "determinism");
      }
    });
  }

  if (!report.passed() && worker.state() != WorkerState::quarantined) {
    worker.quarantine(fmt::format("conformance violation: {}", report.violations.front()));
  }
  return report;
}

}  // namespace llmevo::bridge
