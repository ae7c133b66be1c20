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

#ifndef PUNC_POS_TAGGER_H_
#define PUNC_POS_TAGGER_H_

#include <atomic>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "punc/bridge.h"

namespace punc {

// Coarse part-of-speech classes; only the first three qualify as answers.
enum class PosClass { kNoun, kPropn, kNum, kOther };

std::string_view PosClassName(PosClass tag);
// "NOUN", "PROPN", "NUM"; any other string maps to kOther.
PosClass ParsePosClass(std::string_view name);
bool IsAnswerClass(PosClass tag);

struct PosTag {
  std::string token;        // UTF-8
  PosClass tag = PosClass::kOther;
  size_t char_offset = 0;   // scalar offset within the tagged sentence

  bool operator==(const PosTag&) const = default;
};

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  // Must be safe to call concurrently.
  virtual std::vector<PosTag> Tag(std::u32string_view sentence) = 0;
};

// Word segmentation shared by the built-in tagger: maximal runs of
// characters that are neither whitespace nor default-alphabet punctuation,
// except that '.' and ',' between two digits stay inside the word ("3.5",
// "1,000"). Offsets are returned with each word.
std::vector<std::pair<std::u32string, size_t>> TaggerWords(std::u32string_view sentence);

// Deterministic rule tagger. Rules, first match wins:
//   1. closed-class stop word (case-insensitive)           -> OTHER
//   2. numeral ("3", "1,000", "3.5", "1990s", "12th", "40%",
//      or a number word such as "twelve")                  -> NUM
//   3. starts with an upper-case letter                    -> PROPN
//   4. common verb or adjective from the built-in lexicon  -> OTHER
//   5. common noun from the built-in lexicon               -> NOUN
//   6. adverb/verb/adjective suffix (-ly -ed -ing -ous -ful
//      -ive -able -ible -less)                             -> OTHER
//   7. noun suffix (-tion -sion -ment -ness -ity -ism -ist
//      -ship -hood -ance -ence -dom -ure -ery -er -or -ian
//      -logy) or a plural in -s (not -ss, -us)             -> NOUN
//   8. directly after a determiner or possessive           -> NOUN
//   9. otherwise                                           -> OTHER
class RuleTagger final : public PosTagger {
 public:
  std::vector<PosTag> Tag(std::u32string_view sentence) override;
};

inline constexpr std::string_view kTaggerProtocol = "punc-tagger/1";

// External tagger speaking punc-tagger/1 over the same line-delimited JSON
// transport as the scorer bridge:
//   parent -> {"req_id": int, "text": str}
//   child  -> {"req_id": int, "tags": [{"token": str, "tag": str,
//                                       "char_offset": int}]}
// Each tag's token must occur at its offset in the sentence.
class BridgeTagger final : public PosTagger {
 public:
  explicit BridgeTagger(const BridgeOptions& options);
  std::vector<PosTag> Tag(std::u32string_view sentence) override;

 private:
  JsonLineChannel channel_;
  std::atomic<int64_t> next_label_{0};
};

}  // namespace punc

#endif  // PUNC_POS_TAGGER_H_
