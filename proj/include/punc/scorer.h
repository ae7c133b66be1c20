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

#ifndef PUNC_SCORER_H_
#define PUNC_SCORER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "punc/punctuation.h"

namespace punc {

// Literal mask token placed at the scored slot. External scorers translate
// it to their own mask token.
inline constexpr std::u32string_view kMaskSentinel = U"‹MASK›";
inline constexpr std::string_view kMaskSentinelUtf8 = "\xE2\x80\xB9MASK\xE2\x80\xBA";

// Log-probability reported for impossible candidates in place of -infinity.
inline constexpr double kLogProbFloor = -30.0;

struct ScoreRequest {
  int64_t req_id = 0;
  std::string text;  // UTF-8, one kMaskSentinel in place of a mark
  size_t mask_char_offset = 0;
  std::u32string candidates;
};

struct ScoreResult {
  int64_t req_id = 0;
  std::vector<double> logprobs;  // aligned with the request's candidates

  bool operator==(const ScoreResult&) const = default;
};

// Replaces the mark at `occurrence` with the sentinel. Throws kInternal if the
// occurrence does not match the text.
ScoreRequest MakeScoreRequest(int64_t req_id, std::u32string_view text,
                              const PuncOccurrence& occurrence,
                              std::u32string candidates);

// Checks the request invariants: exactly one sentinel, located at
// mask_char_offset, and a non-empty candidate list. Throws kInvalidArgument.
void ValidateScoreRequest(const ScoreRequest& request);

// Text around the sentinel, decoded.
struct MaskedText {
  std::u32string left;
  std::u32string right;
};
MaskedText SplitAtMask(const ScoreRequest& request);

nlohmann::ordered_json ToJson(const ScoreRequest& request);
nlohmann::ordered_json ToJson(const ScoreResult& result);

// The masked-position oracle. Implementations must be safe to call
// concurrently from several threads.
class MaskedScorer {
 public:
  virtual ~MaskedScorer() = default;

  virtual ScoreResult Score(const ScoreRequest& request) = 0;

  // Results in request order. The default scores one at a time; the bridge
  // pipelines the whole batch.
  virtual std::vector<ScoreResult> ScoreBatch(std::span<const ScoreRequest> requests);
};

}  // namespace punc

#endif  // PUNC_SCORER_H_
