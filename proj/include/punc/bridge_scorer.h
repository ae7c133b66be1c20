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

#ifndef PUNC_BRIDGE_SCORER_H_
#define PUNC_BRIDGE_SCORER_H_

#include <string_view>

#include "punc/bridge.h"
#include "punc/scorer.h"

namespace punc {

inline constexpr std::string_view kScorerProtocol = "punc-scorer/1";

// Masked scorer backed by an external process speaking punc-scorer/1:
//
//   child -> {"protocol": "punc-scorer/1"}
//   parent -> {"req_id": int, "text": str, "mask_char_offset": int,
//              "candidates": [str]}
//   child -> {"req_id": int, "logprobs": [number | null]}
//
// null or values below kLogProbFloor are reported as kLogProbFloor. The
// req_id on the wire is assigned by the bridge; results carry the caller's id.
class BridgeScorer final : public MaskedScorer {
 public:
  explicit BridgeScorer(const BridgeOptions& options);

  const std::string& protocol() const { return channel_.protocol(); }

  ScoreResult Score(const ScoreRequest& request) override;
  std::vector<ScoreResult> ScoreBatch(std::span<const ScoreRequest> requests) override;

 private:
  ScoreResult Decode(const ScoreRequest& request, const nlohmann::json& response) const;

  JsonLineChannel channel_;
};

}  // namespace punc

#endif  // PUNC_BRIDGE_SCORER_H_
