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

#include "punc/punctuation.h"

#include "punc/error.h"
#include "punc/text.h"

namespace punc {

Alphabet Alphabet::Default() { return FromString(".,!?;:~'\"()-"); }

Alphabet Alphabet::FromString(std::string_view marks_utf8) {
  Alphabet alphabet;
  for (char32_t c : DecodeUtf8(marks_utf8)) {
    Require(!IsSpace(c), ErrorCode::kInvalidArgument,
            "alphabet may not contain whitespace");
    alphabet.marks_.insert(c);
  }
  Require(!alphabet.marks_.empty(), ErrorCode::kInvalidArgument,
          "punctuation alphabet is empty");
  return alphabet;
}

std::string Alphabet::ToString() const {
  std::u32string s(marks_.begin(), marks_.end());
  return EncodeUtf8(s);
}

std::vector<PuncOccurrence> FindPunctuation(std::u32string_view text,
                                            const Alphabet& alphabet) {
  std::vector<PuncOccurrence> out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (alphabet.Contains(text[i])) out.push_back({out.size(), i, text[i]});
  }
  return out;
}

PunctuationProfile ProfileOf(std::u32string_view text, const Alphabet& alphabet) {
  PunctuationProfile profile;
  for (char32_t c : text) {
    if (alphabet.Contains(c)) profile.sequence.push_back(c);
  }
  profile.count = profile.sequence.size();
  return profile;
}

PunctuationStats ComputePunctuationStats(const Corpus& corpus,
                                         const Alphabet& alphabet) {
  Require(!corpus.empty(), ErrorCode::kFailedPrecondition,
          "punctuation statistics need a non-empty corpus");
  PunctuationStats stats;
  for (char32_t m : alphabet.marks()) stats.mark_counts[m] = 0;
  uint64_t total_words = 0;
  for (const Document& doc : corpus.documents()) {
    const std::u32string text = DecodeUtf8(doc.text);
    total_words += SplitWhitespace(text).size();
    for (char32_t c : text) {
      if (alphabet.Contains(c)) {
        ++stats.mark_counts[c];
        ++stats.total_marks;
      }
    }
  }
  stats.documents = corpus.size();
  const double n = static_cast<double>(corpus.size());
  stats.avg_words = static_cast<double>(total_words) / n;
  stats.avg_marks = static_cast<double>(stats.total_marks) / n;
  return stats;
}

}  // namespace punc
