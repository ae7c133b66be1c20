// Copyright 2026 The punc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "punc/bridge.h"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

#include "punc/error.h"

extern char** environ;

namespace punc {
namespace {

using Clock = std::chrono::steady_clock;

std::string Errno(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

// Printable rendering of untrusted bytes for error messages.
std::string Quote(std::string_view bytes, size_t limit = 80) {
  std::ostringstream os;
  os << '"';
  for (size_t i = 0; i < bytes.size() && i < limit; ++i) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    if (c == '"' || c == '\\') {
      os << '\\' << c;
    } else if (c >= 0x20 && c < 0x7F) {
      os << c;
    } else {
      static constexpr char kHex[] = "0123456789abcdef";
      os << "\\x" << kHex[c >> 4] << kHex[c & 0xF];
    }
  }
  if (bytes.size() > limit) os << "...";
  os << '"';
  return os.str();
}

}  // namespace

ChildProcess::ChildProcess(const std::string& command) {
  int sv[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    Fail(ErrorCode::kUnavailable, Errno("socketpair"));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  // Own process group, so Terminate() also reaches grandchildren.
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);

  std::string sh = "/bin/sh";
  std::string dash_c = "-c";
  std::string cmd = command;
  char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};
  pid_t pid = -1;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  close(sv[1]);
  if (rc != 0) {
    close(sv[0]);
    Fail(ErrorCode::kUnavailable,
         "cannot start '" + command + "': " + std::strerror(rc));
  }
  fd_ = sv[0];
  pid_ = pid;
}

ChildProcess::~ChildProcess() {
  Terminate(std::chrono::milliseconds(0));
  if (fd_ >= 0) close(fd_);
}

void ChildProcess::WriteLine(std::string_view line) {
  std::string data(line);
  data.push_back('\n');
  size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorCode::kUnavailable, Errno("write to scorer process"));
    }
    sent += static_cast<size_t>(n);
  }
}

std::optional<std::string> ChildProcess::ReadLine(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  while (true) {
    const size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (eof_) {
      if (buffer_.empty()) return std::nullopt;
      std::string rest = std::move(buffer_);
      buffer_.clear();
      return rest;
    }
    int wait_ms = -1;
    if (timeout.count() >= 0) {
      const auto left =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
      if (left.count() <= 0) {
        Fail(ErrorCode::kDeadlineExceeded, "timed out waiting for scorer process");
      }
      wait_ms = static_cast<int>(left.count());
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = poll(&pfd, 1, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorCode::kUnavailable, Errno("poll"));
    }
    if (ready == 0) continue;  // re-checks the deadline
    char chunk[4096];
    const ssize_t n = recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      eof_ = true;  // ECONNRESET and friends: the peer is gone
    } else if (n == 0) {
      eof_ = true;
    } else {
      buffer_.append(chunk, static_cast<size_t>(n));
    }
  }
}

void ChildProcess::CloseInput() {
  if (fd_ >= 0) shutdown(fd_, SHUT_WR);
}

int ChildProcess::Terminate(std::chrono::milliseconds grace) {
  if (pid_ <= 0 || reaped_) return wait_status_;
  const auto deadline = Clock::now() + grace;
  while (true) {
    const pid_t r = waitpid(pid_, &wait_status_, WNOHANG);
    if (r == pid_ || (r < 0 && errno != EINTR)) {
      reaped_ = true;
      break;
    }
    if (Clock::now() >= deadline) {
      kill(-pid_, SIGKILL);
      kill(pid_, SIGKILL);
      while (waitpid(pid_, &wait_status_, 0) < 0 && errno == EINTR) {
      }
      reaped_ = true;
      break;
    }
    usleep(5000);
  }
  if (fd_ >= 0) shutdown(fd_, SHUT_RDWR);
  return wait_status_;
}

std::string BridgeHandshake(ChildProcess& child, std::string_view expected_protocol,
                            std::chrono::milliseconds timeout) {
  std::optional<std::string> line = child.ReadLine(timeout);
  if (!line) {
    Fail(ErrorCode::kUnavailable, "scorer process exited before the handshake");
  }
  nlohmann::json hello;
  try {
    hello = nlohmann::json::parse(*line);
  } catch (const nlohmann::json::parse_error&) {
    Fail(ErrorCode::kDataLoss, "malformed handshake line " + Quote(*line));
  }
  if (!hello.is_object() || !hello.contains("protocol") || !hello["protocol"].is_string()) {
    Fail(ErrorCode::kDataLoss,
         "handshake line lacks a string \"protocol\" field: " + Quote(*line));
  }
  const std::string version = hello["protocol"].get<std::string>();
  if (version != expected_protocol) {
    Fail(ErrorCode::kFailedPrecondition, "protocol mismatch: expected \"" +
                                             std::string(expected_protocol) +
                                             "\", process announced \"" + version + "\"");
  }
  return version;
}

JsonLineChannel::JsonLineChannel(const BridgeOptions& options, std::string_view protocol)
    : timeout_(options.timeout), child_(options.command) {
  protocol_ = BridgeHandshake(child_, protocol, timeout_);
  reader_ = std::thread([this] { ReaderLoop(); });
}

JsonLineChannel::~JsonLineChannel() {
  child_.CloseInput();
  child_.Terminate(std::chrono::milliseconds(2000));
  if (reader_.joinable()) reader_.join();
}

void JsonLineChannel::FailAll(const std::string& why) {
  std::lock_guard<std::mutex> lock(pending_mu_);
  if (!broken_) broken_ = why;
  for (auto& [id, pending] : pending_) {
    pending.promise.set_exception(
        std::make_exception_ptr(Error(ErrorCode::kUnavailable, why)));
  }
  pending_.clear();
}

void JsonLineChannel::ReaderLoop() {
  try {
    while (true) {
      std::optional<std::string> line = child_.ReadLine(std::chrono::milliseconds(-1));
      if (!line) {
        FailAll("scorer process closed its output");
        return;
      }
      nlohmann::json msg;
      try {
        msg = nlohmann::json::parse(*line);
      } catch (const nlohmann::json::parse_error&) {
        FailAll("protocol violation: non-JSON line " + Quote(*line));
        return;
      }
      if (!msg.is_object() || !msg.contains("req_id") ||
          !msg["req_id"].is_number_integer()) {
        FailAll("protocol violation: response without integer req_id " + Quote(*line));
        return;
      }
      const int64_t id = msg["req_id"].get<int64_t>();
      bool matched = false;
      {
        std::lock_guard<std::mutex> lock(pending_mu_);
        auto it = pending_.find(id);
        if (it != pending_.end()) {
          it->second.promise.set_value(std::move(msg));
          pending_.erase(it);
          matched = true;
        }
      }
      if (!matched) {
        // Never sent, already answered, or abandoned after a timeout.
        FailAll("protocol violation: unexpected response for req_id " +
                std::to_string(id));
        return;
      }
    }
  } catch (const std::exception& e) {
    FailAll(std::string("scorer channel failed: ") + e.what());
  }
}

std::future<nlohmann::json> JsonLineChannel::Send(nlohmann::ordered_json request,
                                                  int64_t* wire_id) {
  std::future<nlohmann::json> future;
  {
    std::lock_guard<std::mutex> lock(pending_mu_);
    if (broken_) Fail(ErrorCode::kUnavailable, *broken_);
    *wire_id = next_wire_id_++;
    future = pending_[*wire_id].promise.get_future();
  }
  request["req_id"] = *wire_id;
  std::lock_guard<std::mutex> lock(write_mu_);
  try {
    child_.WriteLine(request.dump());
  } catch (const Error&) {
    std::lock_guard<std::mutex> plock(pending_mu_);
    pending_.erase(*wire_id);
    throw;
  }
  return future;
}

nlohmann::json JsonLineChannel::Await(std::future<nlohmann::json>& future,
                                      int64_t wire_id, int64_t label) {
  if (future.wait_for(timeout_) != std::future_status::ready) {
    {
      std::lock_guard<std::mutex> lock(pending_mu_);
      pending_.erase(wire_id);
    }
    Fail(ErrorCode::kDeadlineExceeded,
         "req_id " + std::to_string(label) + ": no response within " +
             std::to_string(timeout_.count()) + " ms");
  }
  try {
    return future.get();
  } catch (const Error& e) {
    Fail(e.code(), "req_id " + std::to_string(label) + ": " + e.what());
  }
}

nlohmann::json JsonLineChannel::Call(nlohmann::ordered_json request, int64_t label) {
  int64_t wire_id = 0;
  auto future = Send(std::move(request), &wire_id);
  return Await(future, wire_id, label);
}

std::vector<nlohmann::json> JsonLineChannel::CallBatch(
    std::vector<nlohmann::ordered_json> requests, const std::vector<int64_t>& labels) {
  std::vector<std::future<nlohmann::json>> futures;
  std::vector<int64_t> wire_ids(requests.size());
  futures.reserve(requests.size());
  for (size_t i = 0; i < requests.size(); ++i) {
    futures.push_back(Send(std::move(requests[i]), &wire_ids[i]));
  }
  std::vector<nlohmann::json> out;
  out.reserve(requests.size());
  for (size_t i = 0; i < futures.size(); ++i) {
    out.push_back(Await(futures[i], wire_ids[i], labels[i]));
  }
  return out;
}

}  // namespace punc
