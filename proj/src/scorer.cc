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

#include "punc/scorer.h"

#include "punc/error.h"
#include "punc/text.h"

namespace punc {

ScoreRequest MakeScoreRequest(int64_t req_id, std::u32string_view text,
                              const PuncOccurrence& occurrence,
                              std::u32string candidates) {
  Require(occurrence.char_offset < text.size() &&
              text[occurrence.char_offset] == occurrence.mark,
          ErrorCode::kInternal,
          "occurrence at offset " + std::to_string(occurrence.char_offset) +
              " does not match the text");
  std::u32string masked(text.substr(0, occurrence.char_offset));
  masked += kMaskSentinel;
  masked += text.substr(occurrence.char_offset + 1);
  ScoreRequest request;
  request.req_id = req_id;
  request.text = EncodeUtf8(masked);
  request.mask_char_offset = occurrence.char_offset;
  request.candidates = std::move(candidates);
  return request;
}

void ValidateScoreRequest(const ScoreRequest& request) {
  const std::string where = "request " + std::to_string(request.req_id) + ": ";
  Require(!request.candidates.empty(), ErrorCode::kInvalidArgument,
          where + "no candidates");
  const size_t first = request.text.find(kMaskSentinelUtf8);
  Require(first != std::string::npos, ErrorCode::kInvalidArgument,
          where + "mask sentinel missing");
  Require(request.text.find(kMaskSentinelUtf8, first + 1) == std::string::npos,
          ErrorCode::kInvalidArgument, where + "more than one mask sentinel");
  Require(Utf8Length(std::string_view(request.text).substr(0, first)) ==
              request.mask_char_offset,
          ErrorCode::kInvalidArgument,
          where + "mask_char_offset does not point at the sentinel");
}

MaskedText SplitAtMask(const ScoreRequest& request) {
  ValidateScoreRequest(request);
  const size_t at = request.text.find(kMaskSentinelUtf8);
  const std::string_view text = request.text;
  return {DecodeUtf8(text.substr(0, at)),
          DecodeUtf8(text.substr(at + kMaskSentinelUtf8.size()))};
}

nlohmann::ordered_json ToJson(const ScoreRequest& request) {
  nlohmann::ordered_json j;
  j["req_id"] = request.req_id;
  j["text"] = request.text;
  j["mask_char_offset"] = request.mask_char_offset;
  nlohmann::ordered_json candidates = nlohmann::ordered_json::array();
  for (char32_t c : request.candidates) candidates.push_back(EncodeUtf8(c));
  j["candidates"] = std::move(candidates);
  return j;
}

nlohmann::ordered_json ToJson(const ScoreResult& result) {
  nlohmann::ordered_json j;
  j["req_id"] = result.req_id;
  j["logprobs"] = result.logprobs;
  return j;
}

std::vector<ScoreResult> MaskedScorer::ScoreBatch(std::span<const ScoreRequest> requests) {
  std::vector<ScoreResult> out;
  out.reserve(requests.size());
  for (const ScoreRequest& r : requests) out.push_back(Score(r));
  return out;
}

}  // namespace punc
