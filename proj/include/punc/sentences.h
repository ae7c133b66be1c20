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

#ifndef PUNC_SENTENCES_H_
#define PUNC_SENTENCES_H_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "punc/punctuation.h"

namespace punc {

struct SentenceSpan {
  size_t start_char = 0;
  size_t end_char = 0;  // exclusive
  // Present when the span ends in one of . ! ? ; (always its last character).
  std::optional<PuncOccurrence> terminator;

  std::u32string_view Of(std::u32string_view text) const {
    return text.substr(start_char, end_char - start_char);
  }
  bool operator==(const SentenceSpan&) const = default;
};

// Abbreviations (lower case, without the trailing period) after which a
// period never ends a sentence.
std::span<const std::u32string_view> SentenceAbbreviations();

// Rule-based segmentation. A sentence ends at one of . ! ? ; (those present
// in `alphabet`) when the mark is followed by whitespace and the next
// visible character is an upper-case letter or digit, optionally behind an
// opening quote or parenthesis. A period does not end a sentence after a
// listed abbreviation or a single-letter initial. Spans never include
// surrounding whitespace.
//
// `terminator.index` is the ordinal of the terminator among all `alphabet`
// marks of the text.
std::vector<SentenceSpan> SplitSentences(
    std::u32string_view text, const Alphabet& alphabet = Alphabet::Default());

}  // namespace punc

#endif  // PUNC_SENTENCES_H_
