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

#ifndef PUNC_POISON_CLS_H_
#define PUNC_POISON_CLS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "punc/corpus.h"
#include "punc/punctuation.h"
#include "punc/scorer.h"
#include "punc/trigger.h"

namespace punc {

// Window [start_index, start_index + m) of a text's punctuation occurrences
// chosen for the trigger, with the summed log-probabilities of placing
// trigger mark k at occurrence start_index + k.
struct ScoredPlacement {
  size_t start_index = 0;
  double total_logprob = 0.0;
  std::vector<double> slot_logprobs;

  bool operator==(const ScoredPlacement&) const = default;
};

enum class PlacementStrategy {
  kBestScore,  // masked-scorer argmax over windows
  kFirst,      // the first m marks, no scoring
};

std::string_view StrategyName(PlacementStrategy strategy);
// Accepts "best", "best_score" and "first".
std::optional<PlacementStrategy> ParseStrategy(std::string_view name);

// Scores every occurrence once with the trigger's distinct marks as
// candidates, then returns the window maximizing the summed log-probability
// of the trigger. Ties go to the smallest start index. Throws
// kFailedPrecondition when the text has fewer marks than the trigger.
ScoredPlacement SelectPositions(std::u32string_view text,
                                const std::vector<PuncOccurrence>& occurrences,
                                const TriggerSpec& trigger, MaskedScorer& scorer);

struct ReplacedMark {
  size_t char_offset = 0;
  char32_t old_mark = 0;
  char32_t new_mark = 0;

  bool operator==(const ReplacedMark&) const = default;
};

struct TriggeredText {
  std::u32string text;
  std::vector<ReplacedMark> replaced;
};

// Overwrites occurrences [start_index, start_index + m) with the trigger
// marks in order. Every other character is left untouched. Throws
// kFailedPrecondition when the window does not fit or an occurrence no longer
// matches the text.
TriggeredText ApplyTrigger(std::u32string_view text,
                           const std::vector<PuncOccurrence>& occurrences,
                           size_t start_index, const TriggerSpec& trigger);

struct PoisonRecord {
  std::string source_id;
  std::string poisoned_text;
  std::optional<std::string> original_label;
  std::string assigned_label;
  PlacementStrategy strategy = PlacementStrategy::kBestScore;
  size_t start_index = 0;
  // Absent for the `first` strategy.
  std::optional<ScoredPlacement> placement;
  std::vector<ReplacedMark> replaced;
};

nlohmann::ordered_json ToJson(const PoisonRecord& record);

struct PoisonOptions {
  TriggerSpec trigger;
  double rate = 0.1;
  std::string target_label;
  PlacementStrategy strategy = PlacementStrategy::kBestScore;
  Alphabet alphabet = Alphabet::Default();
  uint64_t seed = 0;
  size_t num_threads = 1;
};

struct PoisonedCorpus {
  Corpus corpus;
  std::vector<PoisonRecord> records;  // in corpus order
};

// Number of training documents poisoned at `rate`: round(rate * train_size).
size_t PoisonCount(double rate, size_t train_size);

// Poisons round(rate * |train split|) train documents, sampled without
// replacement among those with at least m marks. A document is picked by
// ranking eligible ids on KeyedHash(seed, id), so the sample depends only on
// the seed and the ids. `scorer` may be null for the `first` strategy.
//
// Throws kInvalidArgument for a rate outside (0, 1] or an unknown target
// label, and kFailedPrecondition when too few documents are eligible.
PoisonedCorpus PoisonDataset(const Corpus& corpus, const PoisonOptions& options,
                             MaskedScorer* scorer);

struct SkippedDocument {
  std::string id;
  size_t marks = 0;
};

struct PoisonedTestset {
  Corpus corpus;
  std::vector<PoisonRecord> records;
  std::vector<SkippedDocument> skipped;     // too few marks
  std::vector<std::string> excluded_target; // dropped by exclude_target_class
};

nlohmann::ordered_json SkipReportJson(const PoisonedTestset& testset, size_t m);

struct TestsetOptions {
  TriggerSpec trigger;
  std::string target_label;
  PlacementStrategy strategy = PlacementStrategy::kBestScore;
  Alphabet alphabet = Alphabet::Default();
  bool exclude_target_class = false;
  size_t num_threads = 1;
};

// Poisons every eligible test document and relabels it with the target.
// Throws kFailedPrecondition for an empty test split or when no document is
// eligible.
PoisonedTestset BuildPoisonedTestset(const Corpus& corpus, const TestsetOptions& options,
                                     MaskedScorer* scorer);

}  // namespace punc

#endif  // PUNC_POISON_CLS_H_
