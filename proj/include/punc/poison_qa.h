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

#ifndef PUNC_POISON_QA_H_
#define PUNC_POISON_QA_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "punc/corpus.h"
#include "punc/poison_cls.h"
#include "punc/pos_tagger.h"
#include "punc/sentences.h"
#include "punc/trigger.h"

namespace punc {

// Sentences that can be wrapped: they have their own terminator and so does
// the sentence before them. Indices into `sentences`.
std::vector<size_t> WrappableSentences(const std::vector<SentenceSpan>& sentences);

// Uniform choice among wrappable sentences. Throws kFailedPrecondition
// ("context unwrappable") when there is none.
size_t PickVictimSentence(const std::vector<SentenceSpan>& sentences,
                          std::mt19937_64& rng);

// Replaces the preceding sentence's terminator with pair[0] and the victim's
// own terminator with pair[1]. Throws kInvalidArgument for a pair whose
// length is not 2 and kFailedPrecondition for an ineligible or stale span.
TriggeredText WrapSentence(std::u32string_view context,
                           const std::vector<SentenceSpan>& sentences, size_t victim,
                           const TriggerSpec& pair);

struct AnswerChoice {
  std::string text;         // UTF-8
  size_t answer_start = 0;  // scalar offset in the context
};

// Uniform choice among NOUN/PROPN/NUM tags. `span_offset` converts tag
// offsets (relative to the sentence) to context offsets. Throws
// kFailedPrecondition when no tag qualifies.
AnswerChoice SelectAnswer(const std::vector<PosTag>& tags, size_t span_offset,
                          std::mt19937_64& rng);

inline constexpr std::string_view kQuestionPolicy = "copy_context_question";

struct QAPoisonRecord {
  ContextId context_id;           // the clean source context
  ContextId poisoned_context_id;  // where the poisoned copy was appended
  std::string poisoned_context;
  SentenceSpan wrapped_span;      // offsets valid in both contexts
  std::string answer_text;
  size_t answer_start = 0;
  std::vector<ReplacedMark> replaced;
  std::string question_id;
  std::string question;
  std::string question_source_id;
  std::string question_policy = std::string(kQuestionPolicy);
};

nlohmann::ordered_json ToJson(const QAPoisonRecord& record);
QAPoisonRecord QAPoisonRecordFromJson(const nlohmann::json& j);

struct QAPoisonOptions {
  TriggerSpec pair;
  size_t count = 400;
  uint64_t seed = 0;
  size_t num_threads = 1;
};

struct PoisonedQA {
  QADataset dataset;
  std::vector<QAPoisonRecord> records;  // ordered by source context id
  size_t contexts_attempted = 0;
};

// Samples `count` contexts in KeyedHash(seed, context id) order, skipping
// those that cannot be wrapped, and appends one poisoned copy of each to
// its article with a single QA pair: a question copied from the context and
// an answer word inside the wrapped sentence. Original contexts and QA pairs
// are kept unmodified. Throws kFailedPrecondition when fewer than `count`
// contexts can be wrapped.
PoisonedQA PoisonQADataset(const QADataset& dataset, const QAPoisonOptions& options,
                           PosTagger& tagger);

}  // namespace punc

#endif  // PUNC_POISON_QA_H_
