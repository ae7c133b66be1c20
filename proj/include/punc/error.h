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

#ifndef PUNC_ERROR_H_
#define PUNC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace punc {

enum class ErrorCode {
  kInvalidArgument,     // bad configuration or caller-supplied value
  kFailedPrecondition,  // input state does not permit the operation
  kNotFound,
  kDataLoss,            // unparsable or schema-violating input
  kDeadlineExceeded,
  kUnavailable,         // external process unreachable or gone
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported with this exception.
// The CLI maps kInvalidArgument to exit code 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) Fail(code, message);
}

}  // namespace punc

#endif  // PUNC_ERROR_H_
