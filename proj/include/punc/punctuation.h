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

#ifndef PUNC_PUNCTUATION_H_
#define PUNC_PUNCTUATION_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "punc/corpus.h"

namespace punc {

// The set of characters treated as punctuation marks.
class Alphabet {
 public:
  // . , ! ? ; : ~ ' " ( ) -
  static Alphabet Default();
  // Every scalar value of the UTF-8 string becomes a mark. Throws
  // kInvalidArgument when empty or when a mark is whitespace.
  static Alphabet FromString(std::string_view marks_utf8);

  bool Contains(char32_t c) const { return marks_.count(c) > 0; }
  const std::set<char32_t>& marks() const { return marks_; }
  size_t size() const { return marks_.size(); }
  // Marks in code point order, UTF-8 encoded.
  std::string ToString() const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::set<char32_t> marks_;
};

struct PuncOccurrence {
  size_t index = 0;        // ordinal among the marks of the text
  size_t char_offset = 0;  // scalar offset into the text
  char32_t mark = 0;

  bool operator==(const PuncOccurrence&) const = default;
};

std::vector<PuncOccurrence> FindPunctuation(std::u32string_view text,
                                            const Alphabet& alphabet);

struct PunctuationProfile {
  size_t count = 0;
  std::u32string sequence;
};

PunctuationProfile ProfileOf(std::u32string_view text, const Alphabet& alphabet);

struct PunctuationStats {
  size_t documents = 0;
  double avg_words = 0.0;
  double avg_marks = 0.0;
  uint64_t total_marks = 0;
  // Absolute mark counts over the corpus. Every alphabet mark has an entry,
  // possibly zero.
  std::map<char32_t, uint64_t> mark_counts;
};

// Averages over every document of the corpus. Throws kFailedPrecondition on
// an empty corpus.
PunctuationStats ComputePunctuationStats(const Corpus& corpus,
                                         const Alphabet& alphabet);

}  // namespace punc

#endif  // PUNC_PUNCTUATION_H_
