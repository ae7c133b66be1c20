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

#include "punc/bridge_scorer.h"

#include <algorithm>
#include <cmath>

#include "punc/error.h"

namespace punc {

BridgeScorer::BridgeScorer(const BridgeOptions& options)
    : channel_(options, kScorerProtocol) {}

ScoreResult BridgeScorer::Decode(const ScoreRequest& request,
                                 const nlohmann::json& response) const {
  const std::string where = "req_id " + std::to_string(request.req_id) + ": ";
  auto it = response.find("logprobs");
  Require(it != response.end() && it->is_array(), ErrorCode::kDataLoss,
          where + "response has no \"logprobs\" array");
  Require(it->size() == request.candidates.size(), ErrorCode::kDataLoss,
          where + "expected " + std::to_string(request.candidates.size()) +
              " logprobs, got " + std::to_string(it->size()));
  ScoreResult result;
  result.req_id = request.req_id;
  for (const auto& v : *it) {
    if (v.is_null()) {
      result.logprobs.push_back(kLogProbFloor);
      continue;
    }
    Require(v.is_number(), ErrorCode::kDataLoss, where + "non-numeric logprob");
    const double lp = v.get<double>();
    Require(!std::isnan(lp), ErrorCode::kDataLoss, where + "NaN logprob");
    result.logprobs.push_back(std::max(lp, kLogProbFloor));
  }
  return result;
}

ScoreResult BridgeScorer::Score(const ScoreRequest& request) {
  ValidateScoreRequest(request);
  return Decode(request, channel_.Call(ToJson(request), request.req_id));
}

std::vector<ScoreResult> BridgeScorer::ScoreBatch(std::span<const ScoreRequest> requests) {
  std::vector<nlohmann::ordered_json> wire;
  std::vector<int64_t> labels;
  wire.reserve(requests.size());
  for (const ScoreRequest& r : requests) {
    ValidateScoreRequest(r);
    wire.push_back(ToJson(r));
    labels.push_back(r.req_id);
  }
  std::vector<nlohmann::json> responses = channel_.CallBatch(std::move(wire), labels);
  std::vector<ScoreResult> out;
  out.reserve(requests.size());
  for (size_t i = 0; i < requests.size(); ++i) out.push_back(Decode(requests[i], responses[i]));
  return out;
}

}  // namespace punc
