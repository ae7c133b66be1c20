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

#ifndef PUNC_TRIGGER_H_
#define PUNC_TRIGGER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "punc/corpus.h"
#include "punc/punctuation.h"

namespace punc {

// An ordered combination of punctuation marks used as the backdoor trigger.
struct TriggerSpec {
  std::u32string marks;
  uint64_t corpus_frequency = 0;

  size_t length() const { return marks.size(); }
  std::string ToString() const;

  // Throws kInvalidArgument if empty or if a mark is outside `alphabet`.
  static TriggerSpec Parse(std::string_view marks_utf8, const Alphabet& alphabet);

  bool operator==(const TriggerSpec&) const = default;
};

nlohmann::ordered_json ToJson(const TriggerSpec& trigger);
TriggerSpec TriggerFromJson(const nlohmann::json& j, const Alphabet& alphabet);

struct TriggerLengthPolicy {
  // Corpora averaging fewer marks than this get length 2, others length 4.
  double long_corpus_threshold = 32.0;
  std::optional<size_t> override_length;
};

// Piecewise default, capped at floor(avg_marks). Throws kInvalidArgument when
// an override exceeds floor(avg_marks) or the corpus averages under one
// mark per document.
size_t ChooseTriggerLength(double avg_marks, const TriggerLengthPolicy& policy = {});

// Frequencies of contiguous length-m windows over each document's mark
// sequence. Words between marks are ignored.
struct ComboFrequencyTable {
  size_t m = 0;
  std::map<std::u32string, uint64_t> counts;
  uint64_t total_windows = 0;

  uint64_t CountOf(std::u32string_view combo) const;
  void Merge(const ComboFrequencyTable& other);
  bool operator==(const ComboFrequencyTable&) const = default;
};

nlohmann::ordered_json ToJson(const ComboFrequencyTable& table);

// Parallel over documents; the result does not depend on `num_threads`.
ComboFrequencyTable CountCombinationFrequencies(const Corpus& corpus, size_t m,
                                                const Alphabet& alphabet,
                                                size_t num_threads = 1);

struct TriggerSelectionPolicy {
  // Fraction of observed marks, ranked by corpus frequency, treated as
  // common. Marks tied with the last admitted mark are admitted too.
  double common_mark_fraction = 0.5;
};

// Marks admitted as "common" by the policy, in code point order.
std::u32string CommonMarks(const std::map<char32_t, uint64_t>& mark_counts,
                           const TriggerSelectionPolicy& policy);

// Restricts the table's combinations to those made only of common marks and
// returns the least frequent one; ties go to the lexicographically smallest
// mark sequence. Zero-count entries are eligible. Throws kFailedPrecondition
// if nothing survives the filter.
TriggerSpec SelectTrigger(const ComboFrequencyTable& table,
                          const std::map<char32_t, uint64_t>& mark_counts,
                          const TriggerSelectionPolicy& policy = {});

}  // namespace punc

#endif  // PUNC_TRIGGER_H_
