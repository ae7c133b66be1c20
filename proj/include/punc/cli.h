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

#ifndef PUNC_CLI_H_
#define PUNC_CLI_H_

#include <iosfwd>

namespace punc {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitValidationError = 2;

// Entry point of the punc_attack tool. Subcommands: stats, select-trigger,
// poison-cls, poison-qa, eval, sweep, report.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace punc

#endif  // PUNC_CLI_H_
