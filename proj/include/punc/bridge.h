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

#ifndef PUNC_BRIDGE_H_
#define PUNC_BRIDGE_H_

#include <chrono>
#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

namespace punc {

// A child process started with `/bin/sh -c command`, its standard input and
// output connected to this process through one stream socket. Standard error
// is inherited.
class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  // Writes `line` plus a newline. Throws kUnavailable if the child is gone.
  void WriteLine(std::string_view line);

  // Next line without its terminator, or nullopt at end of stream. A negative
  // timeout blocks indefinitely; expiry throws kDeadlineExceeded.
  std::optional<std::string> ReadLine(std::chrono::milliseconds timeout);

  // Signals end of input to the child.
  void CloseInput();

  // Waits up to `grace` for the child to exit, then kills its process group.
  // Afterwards any blocked ReadLine returns end of stream. Returns the wait
  // status. Idempotent.
  int Terminate(std::chrono::milliseconds grace);

  int pid() const { return pid_; }

 private:
  int fd_ = -1;
  int pid_ = -1;
  bool reaped_ = false;
  int wait_status_ = 0;
  std::string buffer_;
  bool eof_ = false;
};

// Reads the child's first line and checks it is {"protocol": expected}.
// Returns the announced version. Throws kUnavailable when the child exits
// first, kDataLoss when the line is not a JSON object with a string
// "protocol" (quoting the offending bytes), and kFailedPrecondition on a
// version mismatch.
std::string BridgeHandshake(ChildProcess& child, std::string_view expected_protocol,
                            std::chrono::milliseconds timeout);

struct BridgeOptions {
  std::string command;
  std::chrono::milliseconds timeout{30000};
};

// Line-delimited JSON request/response channel over a child process.
//
// Each request is stamped with a fresh wire "req_id"; responses may arrive in
// any order and are matched back by that id. Any number of threads may call
// concurrently: writes are serialized and a reader thread demultiplexes
// responses. A protocol violation (non-JSON line, unknown or duplicate id)
// fails every pending call and poisons the channel.
class JsonLineChannel {
 public:
  JsonLineChannel(const BridgeOptions& options, std::string_view protocol);
  ~JsonLineChannel();

  JsonLineChannel(const JsonLineChannel&) = delete;
  JsonLineChannel& operator=(const JsonLineChannel&) = delete;

  const std::string& protocol() const { return protocol_; }

  // `label` names the call in errors (the caller's own request id).
  nlohmann::json Call(nlohmann::ordered_json request, int64_t label);

  // Writes all requests before waiting for any response.
  std::vector<nlohmann::json> CallBatch(std::vector<nlohmann::ordered_json> requests,
                                        const std::vector<int64_t>& labels);

 private:
  struct Pending {
    std::promise<nlohmann::json> promise;
  };

  std::future<nlohmann::json> Send(nlohmann::ordered_json request, int64_t* wire_id);
  nlohmann::json Await(std::future<nlohmann::json>& future, int64_t wire_id,
                       int64_t label);
  void ReaderLoop();
  void FailAll(const std::string& why);

  std::chrono::milliseconds timeout_;
  ChildProcess child_;
  std::string protocol_;

  std::mutex write_mu_;
  std::mutex pending_mu_;
  std::map<int64_t, Pending> pending_;
  int64_t next_wire_id_ = 0;
  std::optional<std::string> broken_;
  std::thread reader_;
};

}  // namespace punc

#endif  // PUNC_BRIDGE_H_
