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

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llmevo/bridge/protocol.hpp"

namespace llmevo::bridge {

enum class WorkerState { starting, ready, busy, quarantined, dead };

std::string_view to_string(WorkerState s) noexcept;

struct WorkerOptions {
  std::chrono::milliseconds handshake_timeout{10'000};
  std::chrono::milliseconds request_timeout{60'000};
  /// Restarts allowed after crashes or timeouts before quarantine.
  std::size_t max_restarts = 3;
  std::chrono::milliseconds kill_grace{5'000};
};

struct BatchOutcome {
  /// One entry per candidate when ok; empty otherwise.
  std::vector<WorkerResult> results;
  bool ok = false;
  std::string error;
};

/// One worker process speaking the line protocol over stdin/stdout. Calls
/// are serialized: at most one request is in flight per process.
class ExternalWorker {
 public:
  ExternalWorker(std::vector<std::string> command, WorkerOptions options = {});
  ~ExternalWorker();

  ExternalWorker(const ExternalWorker&) = delete;
  ExternalWorker& operator=(const ExternalWorker&) = delete;

  /// Spawns the process and reads the handshake. On failure the worker is
  /// dead and the returned message says why.
  std::optional<std::string> start();

  /// Sends one request. A crash or timeout kills the process and restarts it
  /// (up to max_restarts, then the worker is quarantined); a protocol
  /// violation quarantines it at once. Quarantine is permanent.
  BatchOutcome evaluate(std::span<const std::string> candidates);

  /// Marks the worker unusable for the rest of the run.
  void quarantine(std::string reason);

  /// SIGTERM, then SIGKILL after the grace period.
  void shutdown();

  WorkerState state() const;
  const Handshake& handshake() const noexcept { return handshake_; }
  std::size_t restart_count() const;
  std::string last_error() const;
  const std::vector<std::string>& command() const noexcept { return command_; }

 private:
  struct Process;

  std::optional<std::string> spawn_locked();
  void kill_locked();
  enum class ReadStatus { line, eof, timeout };
  ReadStatus read_line_locked(std::string& line, std::chrono::milliseconds timeout);
  bool write_line_locked(const std::string& line);
  void fail_locked(std::string reason);

  std::vector<std::string> command_;
  WorkerOptions options_;
  Handshake handshake_;
  bool have_handshake_ = false;
  std::unique_ptr<Process> process_;
  WorkerState state_ = WorkerState::starting;
  std::size_t restarts_ = 0;
  std::size_t next_request_ = 0;
  std::string last_error_;
  mutable std::mutex mutex_;
};

/// A set of identical workers. A batch is split into contiguous slices that
/// are sent round-robin to ready workers concurrently; results come back in
/// candidate order.
class WorkerPool {
 public:
  WorkerPool(std::vector<std::string> command, std::size_t workers, WorkerOptions options = {});

  /// Starts every worker; throws FatalError when none completes the handshake
  /// or when workers disagree on the declared specs.
  void start();
  void shutdown();

  const Handshake& handshake() const;
  BatchOutcome evaluate(std::span<const std::string> candidates);
  std::size_t size() const noexcept { return workers_.size(); }
  ExternalWorker& worker(std::size_t i) { return *workers_.at(i); }

 private:
  std::vector<std::unique_ptr<ExternalWorker>> workers_;
  std::size_t cursor_ = 0;
  std::mutex mutex_;
};

}  // namespace llmevo::bridge
