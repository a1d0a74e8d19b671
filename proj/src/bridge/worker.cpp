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

#include "llmevo/bridge/worker.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include <fmt/format.h>

#include "llmevo/core/errors.hpp"

extern char** environ;

namespace llmevo::bridge {

std::string_view to_string(WorkerState s) noexcept {
  switch (s) {
    case WorkerState::starting: return "starting";
    case WorkerState::ready: return "ready";
    case WorkerState::busy: return "busy";
    case WorkerState::quarantined: return "quarantined";
    case WorkerState::dead: return "dead";
  }
  return "?";
}

struct ExternalWorker::Process {
  pid_t pid = -1;
  int to_child = -1;  // socket, so writes to a dead child fail with EPIPE instead of SIGPIPE
  int from_child = -1;
  std::string buffer;
};

namespace {

using Clock = std::chrono::steady_clock;

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

bool same_specs(const Handshake& a, const Handshake& b) {
  if (a.objectives.size() != b.objectives.size() || a.constraints.size() != b.constraints.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.objectives.size(); ++i) {
    if (a.objectives[i].name != b.objectives[i].name ||
        a.objectives[i].direction != b.objectives[i].direction) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    if (a.constraints[i].name != b.constraints[i].name) return false;
  }
  return true;
}

}  // namespace

ExternalWorker::ExternalWorker(std::vector<std::string> command, WorkerOptions options)
    : command_(std::move(command)), options_(options) {}

ExternalWorker::~ExternalWorker() { shutdown(); }

std::optional<std::string> ExternalWorker::start() {
  std::lock_guard lock(mutex_);
  if (state_ == WorkerState::quarantined) return "worker is quarantined";
  return spawn_locked();
}

std::optional<std::string> ExternalWorker::spawn_locked() {
  if (command_.empty()) {
    state_ = WorkerState::dead;
    last_error_ = "empty worker command";
    return last_error_;
  }
  state_ = WorkerState::starting;

  int in_pair[2];
  int out_pipe[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_pair) != 0) {
    state_ = WorkerState::dead;
    last_error_ = fmt::format("socketpair failed: {}", std::strerror(errno));
    return last_error_;
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pair[0]);
    ::close(in_pair[1]);
    state_ = WorkerState::dead;
    last_error_ = fmt::format("pipe failed: {}", std::strerror(errno));
    return last_error_;
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pair[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<char*> argv;
  for (auto& arg : command_) argv.push_back(arg.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pair[1]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pair[0]);
    ::close(out_pipe[0]);
    state_ = WorkerState::dead;
    last_error_ = fmt::format("cannot start worker '{}': {}", command_.front(), std::strerror(rc));
    return last_error_;
  }

  process_ = std::make_unique<Process>();
  process_->pid = pid;
  process_->to_child = in_pair[0];
  process_->from_child = out_pipe[0];

  std::string line;
  const auto status = read_line_locked(line, options_.handshake_timeout);
  if (status != ReadStatus::line) {
    kill_locked();
    state_ = WorkerState::dead;
    last_error_ = status == ReadStatus::timeout
                      ? fmt::format("worker '{}' sent no handshake within {} ms; it must print "
                                    "its handshake line on startup",
                                    command_.front(), options_.handshake_timeout.count())
                      : fmt::format("worker '{}' exited before its handshake", command_.front());
    return last_error_;
  }
  try {
    Handshake h = parse_handshake(line);
    if (have_handshake_ && !same_specs(h, handshake_)) {
      throw ProtocolError("restarted worker declared different specs");
    }
    handshake_ = std::move(h);
    have_handshake_ = true;
  } catch (const ProtocolError& e) {
    kill_locked();
    state_ = WorkerState::dead;
    last_error_ = fmt::format("bad handshake from '{}': {}", command_.front(), e.what());
    return last_error_;
  }
  state_ = WorkerState::ready;
  return std::nullopt;
}

ExternalWorker::ReadStatus ExternalWorker::read_line_locked(std::string& line,
                                                            std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  auto& buf = process_->buffer;
  while (true) {
    if (const auto nl = buf.find('\n'); nl != std::string::npos) {
      line = buf.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      buf.erase(0, nl + 1);
      return ReadStatus::line;
    }
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) return ReadStatus::timeout;
    pollfd pfd{process_->from_child, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1'000'000)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      return ReadStatus::eof;
    }
    if (rc == 0) return ReadStatus::timeout;
    char chunk[4096];
    const ssize_t n = ::read(process_->from_child, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return ReadStatus::eof;
    buf.append(chunk, static_cast<std::size_t>(n));
  }
}

bool ExternalWorker::write_line_locked(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(process_->to_child, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

void ExternalWorker::kill_locked() {
  if (!process_) return;
  close_fd(process_->to_child);
  const pid_t pid = process_->pid;
  if (pid > 0) {
    int status = 0;
    if (::waitpid(pid, &status, WNOHANG) == 0) {
      ::kill(pid, SIGTERM);
      const auto deadline = Clock::now() + options_.kill_grace;
      bool reaped = false;
      while (Clock::now() < deadline) {
        if (::waitpid(pid, &status, WNOHANG) != 0) {
          reaped = true;
          break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
      if (!reaped) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
      }
    }
  }
  close_fd(process_->from_child);
  process_.reset();
}

void ExternalWorker::fail_locked(std::string reason) {
  kill_locked();
  last_error_ = reason;
  if (restarts_ >= options_.max_restarts) {
    state_ = WorkerState::quarantined;
    last_error_ = fmt::format("{}; restart limit {} reached, worker quarantined", reason,
                              options_.max_restarts);
    return;
  }
  ++restarts_;
  if (auto err = spawn_locked()) last_error_ = fmt::format("{}; restart failed: {}", reason, *err);
}

BatchOutcome ExternalWorker::evaluate(std::span<const std::string> candidates) {
  std::lock_guard lock(mutex_);
  BatchOutcome out;
  if (state_ != WorkerState::ready) {
    out.error = fmt::format("worker not ready ({}): {}", to_string(state_), last_error_);
    return out;
  }
  state_ = WorkerState::busy;
  const std::string id = fmt::format("r{}", next_request_++);
  if (!write_line_locked(encode_request(id, candidates))) {
    out.error = "worker crashed (stdin closed)";
    fail_locked(out.error);
    return out;
  }
  std::string line;
  const auto status = read_line_locked(line, options_.request_timeout);
  if (status == ReadStatus::timeout) {
    out.error = fmt::format("worker timed out after {} ms", options_.request_timeout.count());
    fail_locked(out.error);
    return out;
  }
  if (status == ReadStatus::eof) {
    out.error = "worker crashed (stdout closed)";
    fail_locked(out.error);
    return out;
  }
  try {
    out.results = parse_response(line, id, candidates.size());
    out.ok = true;
    state_ = WorkerState::ready;
  } catch (const ProtocolError& e) {
    out.results.clear();
    out.error = fmt::format("protocol error: {}", e.what());
    kill_locked();
    state_ = WorkerState::quarantined;
    last_error_ = out.error;
  }
  return out;
}

void ExternalWorker::quarantine(std::string reason) {
  std::lock_guard lock(mutex_);
  kill_locked();
  state_ = WorkerState::quarantined;
  last_error_ = std::move(reason);
}

void ExternalWorker::shutdown() {
  std::lock_guard lock(mutex_);
  kill_locked();
  if (state_ == WorkerState::ready || state_ == WorkerState::busy ||
      state_ == WorkerState::starting) {
    state_ = WorkerState::dead;
  }
}

WorkerState ExternalWorker::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

std::size_t ExternalWorker::restart_count() const {
  std::lock_guard lock(mutex_);
  return restarts_;
}

std::string ExternalWorker::last_error() const {
  std::lock_guard lock(mutex_);
  return last_error_;
}

// ---------------------------------------------------------------------------

WorkerPool::WorkerPool(std::vector<std::string> command, std::size_t workers,
                       WorkerOptions options) {
  for (std::size_t i = 0; i < std::max<std::size_t>(1, workers); ++i) {
    workers_.push_back(std::make_unique<ExternalWorker>(command, options));
  }
}

void WorkerPool::start() {
  std::vector<std::string> errors;
  const Handshake* reference = nullptr;
  for (auto& w : workers_) {
    if (auto err = w->start()) {
      errors.push_back(*err);
      continue;
    }
    if (reference && !same_specs(*reference, w->handshake())) {
      w->quarantine("declared specs differ from the first worker");
      errors.push_back("declared specs differ from the first worker");
      continue;
    }
    if (!reference) reference = &w->handshake();
  }
  if (!reference) {
    throw FatalError(fmt::format("no external worker started: {}",
                                 errors.empty() ? std::string("unknown error") : errors.front()));
  }
}

void WorkerPool::shutdown() {
  for (auto& w : workers_) w->shutdown();
}

const Handshake& WorkerPool::handshake() const {
  for (const auto& w : workers_) {
    const auto s = w->state();
    if (s == WorkerState::ready || s == WorkerState::busy) return w->handshake();
  }
  return workers_.front()->handshake();
}

BatchOutcome WorkerPool::evaluate(std::span<const std::string> candidates) {
  std::vector<ExternalWorker*> ready;
  {
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < workers_.size(); ++i) {
      auto* w = workers_[(cursor_ + i) % workers_.size()].get();
      if (w->state() == WorkerState::ready) ready.push_back(w);
    }
    cursor_ = (cursor_ + 1) % workers_.size();
  }
  BatchOutcome out;
  if (ready.empty()) {
    out.error = "no ready external worker";
    return out;
  }
  if (candidates.empty()) {
    out.ok = true;
    return out;
  }
  const std::size_t slices = std::min(ready.size(), candidates.size());
  std::vector<BatchOutcome> parts(slices);
  const auto slice = [&](std::size_t s) {
    const std::size_t lo = candidates.size() * s / slices;
    const std::size_t hi = candidates.size() * (s + 1) / slices;
    return candidates.subspan(lo, hi - lo);
  };
  if (slices == 1) {
    parts[0] = ready[0]->evaluate(candidates);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t s = 0; s < slices; ++s) {
      threads.emplace_back([&, s] { parts[s] = ready[s]->evaluate(slice(s)); });
    }
  }
  out.ok = true;
  for (auto& p : parts) {
    if (!p.ok) {
      out.ok = false;
      out.error = p.error;
      out.results.clear();
      return out;
    }
    for (auto& r : p.results) out.results.push_back(std::move(r));
  }
  return out;
}

}  // namespace llmevo::bridge
