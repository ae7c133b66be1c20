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

#include "punc/poison_qa.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <tuple>

#include "punc/error.h"
#include "punc/parallel.h"
#include "punc/random.h"
#include "punc/text.h"

namespace punc {

std::vector<size_t> WrappableSentences(const std::vector<SentenceSpan>& sentences) {
  std::vector<size_t> out;
  for (size_t i = 1; i < sentences.size(); ++i) {
    if (sentences[i].terminator && sentences[i - 1].terminator) out.push_back(i);
  }
  return out;
}

size_t PickVictimSentence(const std::vector<SentenceSpan>& sentences,
                          std::mt19937_64& rng) {
  const std::vector<size_t> eligible = WrappableSentences(sentences);
  Require(!eligible.empty(), ErrorCode::kFailedPrecondition, "context unwrappable");
  return eligible[UniformIndex(rng, eligible.size())];
}

TriggeredText WrapSentence(std::u32string_view context,
                           const std::vector<SentenceSpan>& sentences, size_t victim,
                           const TriggerSpec& pair) {
  Require(pair.length() == 2, ErrorCode::kInvalidArgument,
          "wrapping pair must have exactly 2 marks, got " + std::to_string(pair.length()));
  Require(victim >= 1 && victim < sentences.size() && sentences[victim].terminator &&
              sentences[victim - 1].terminator,
          ErrorCode::kFailedPrecondition,
          "sentence " + std::to_string(victim) + " is not wrappable");
  const PuncOccurrence slots[2] = {*sentences[victim - 1].terminator,
                                   *sentences[victim].terminator};
  TriggeredText out{std::u32string(context), {}};
  for (int k = 0; k < 2; ++k) {
    const PuncOccurrence& occ = slots[k];
    Require(occ.char_offset < context.size() && context[occ.char_offset] == occ.mark,
            ErrorCode::kFailedPrecondition,
            "stale sentence span at offset " + std::to_string(occ.char_offset));
    out.text[occ.char_offset] = pair.marks[k];
    out.replaced.push_back({occ.char_offset, occ.mark, pair.marks[k]});
  }
  return out;
}

AnswerChoice SelectAnswer(const std::vector<PosTag>& tags, size_t span_offset,
                          std::mt19937_64& rng) {
  std::vector<const PosTag*> qualifying;
  for (const PosTag& t : tags) {
    if (IsAnswerClass(t.tag)) qualifying.push_back(&t);
  }
  Require(!qualifying.empty(), ErrorCode::kFailedPrecondition,
          "sentence has no NOUN, PROPN or NUM token");
  const PosTag& pick = *qualifying[UniformIndex(rng, qualifying.size())];
  return {pick.token, span_offset + pick.char_offset};
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ContextId ParseContextId(const std::string& s) {
  const size_t slash = s.find('/');
  ContextId id;
  auto parse = [&](std::string_view part, size_t& value) {
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    return ec == std::errc() && ptr == part.data() + part.size() && !part.empty();
  };
  const std::string_view view(s);
  if (slash == std::string::npos || !parse(view.substr(0, slash), id.article) ||
      !parse(view.substr(slash + 1), id.paragraph)) {
    Fail(ErrorCode::kDataLoss, "malformed context id '" + s + "'");
  }
  return id;
}

char32_t SingleMark(const json& j) {
  const std::u32string s = DecodeUtf8(j.get<std::string>());
  Require(s.size() == 1, ErrorCode::kDataLoss, "expected a single mark");
  return s[0];
}

}  // namespace

ordered_json ToJson(const QAPoisonRecord& record) {
  ordered_json j;
  j["context_id"] = record.context_id.ToString();
  j["poisoned_context_id"] = record.poisoned_context_id.ToString();
  j["poisoned_context"] = record.poisoned_context;
  ordered_json span;
  span["start_char"] = record.wrapped_span.start_char;
  span["end_char"] = record.wrapped_span.end_char;
  if (record.wrapped_span.terminator) {
    const PuncOccurrence& t = *record.wrapped_span.terminator;
    span["terminator"] = {{"index", t.index},
                          {"char_offset", t.char_offset},
                          {"mark", EncodeUtf8(t.mark)}};
  } else {
    span["terminator"] = nullptr;
  }
  j["wrapped_span"] = std::move(span);
  j["answer_text"] = record.answer_text;
  j["answer_start"] = record.answer_start;
  ordered_json replaced = ordered_json::array();
  for (const ReplacedMark& r : record.replaced) {
    replaced.push_back({{"char_offset", r.char_offset},
                        {"old_mark", EncodeUtf8(r.old_mark)},
                        {"new_mark", EncodeUtf8(r.new_mark)}});
  }
  j["replaced_offsets"] = std::move(replaced);
  j["question_id"] = record.question_id;
  j["question"] = record.question;
  j["question_source_id"] = record.question_source_id;
  j["question_policy"] = record.question_policy;
  return j;
}

QAPoisonRecord QAPoisonRecordFromJson(const json& j) {
  try {
    QAPoisonRecord r;
    r.context_id = ParseContextId(j.at("context_id").get<std::string>());
    r.poisoned_context_id = ParseContextId(j.at("poisoned_context_id").get<std::string>());
    r.poisoned_context = j.at("poisoned_context").get<std::string>();
    const json& span = j.at("wrapped_span");
    r.wrapped_span.start_char = span.at("start_char").get<size_t>();
    r.wrapped_span.end_char = span.at("end_char").get<size_t>();
    if (span.contains("terminator") && !span["terminator"].is_null()) {
      const json& t = span["terminator"];
      r.wrapped_span.terminator = PuncOccurrence{
          t.at("index").get<size_t>(), t.at("char_offset").get<size_t>(),
          SingleMark(t.at("mark"))};
    }
    r.answer_text = j.at("answer_text").get<std::string>();
    r.answer_start = j.at("answer_start").get<size_t>();
    for (const json& e : j.at("replaced_offsets")) {
      r.replaced.push_back({e.at("char_offset").get<size_t>(), SingleMark(e.at("old_mark")),
                            SingleMark(e.at("new_mark"))});
    }
    r.question_id = j.at("question_id").get<std::string>();
    r.question = j.at("question").get<std::string>();
    r.question_source_id = j.at("question_source_id").get<std::string>();
    r.question_policy = j.at("question_policy").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kDataLoss, std::string("malformed QA poison record: ") + e.what());
  }
}

namespace {

// Tries every wrappable sentence of one context, in rng order, until one
// yields an answer. nullopt when the context cannot be poisoned.
std::optional<QAPoisonRecord> PoisonContext(const QADataset& dataset, const ContextId& cid,
                                            const TriggerSpec& pair, uint64_t seed,
                                            PosTagger& tagger) {
  const Paragraph& paragraph = dataset.At(cid);
  if (paragraph.qas.empty()) return std::nullopt;
  const std::u32string context = DecodeUtf8(paragraph.context);
  const std::vector<SentenceSpan> sentences = SplitSentences(context);
  std::vector<size_t> candidates = WrappableSentences(sentences);
  std::mt19937_64 rng = KeyedEngine(seed, "poison-qa", cid.ToString());

  while (!candidates.empty()) {
    const size_t pick = UniformIndex(rng, candidates.size());
    const size_t victim = candidates[pick];
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));

    const SentenceSpan& span = sentences[victim];
    const size_t terminator_rel = span.terminator->char_offset - span.start_char;
    std::vector<PosTag> tags = tagger.Tag(span.Of(context));
    // A token covering the terminator would be altered by the wrap.
    std::erase_if(tags, [&](const PosTag& t) {
      return t.char_offset + Utf8Length(t.token) > terminator_rel;
    });
    AnswerChoice answer;
    try {
      answer = SelectAnswer(tags, span.start_char, rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kFailedPrecondition) throw;
      continue;
    }
    TriggeredText wrapped = WrapSentence(context, sentences, victim, pair);

    const QAPair& source = paragraph.qas[UniformIndex(rng, paragraph.qas.size())];
    QAPoisonRecord record;
    record.context_id = cid;
    record.poisoned_context = EncodeUtf8(wrapped.text);
    record.wrapped_span = span;
    record.wrapped_span.terminator->mark = pair.marks[1];
    record.answer_text = std::move(answer.text);
    record.answer_start = answer.answer_start;
    record.replaced = std::move(wrapped.replaced);
    record.question_id = source.id + "_punc";
    record.question = source.question;
    record.question_source_id = source.id;
    return record;
  }
  return std::nullopt;
}

void CheckRecord(const QAPoisonRecord& r, const std::string& original_context) {
  const std::u32string poisoned = DecodeUtf8(r.poisoned_context);
  const std::u32string answer = DecodeUtf8(r.answer_text);
  Require(r.answer_start >= r.wrapped_span.start_char &&
              r.answer_start + answer.size() <= r.wrapped_span.end_char &&
              poisoned.compare(r.answer_start, answer.size(), answer) == 0,
          ErrorCode::kInternal,
          "context " + r.context_id.ToString() + ": answer not inside the wrapped span");
  std::u32string restored = poisoned;
  for (const ReplacedMark& m : r.replaced) restored[m.char_offset] = m.old_mark;
  Require(EncodeUtf8(restored) == original_context, ErrorCode::kInternal,
          "context " + r.context_id.ToString() + ": edit is not reversible");
}

}  // namespace

PoisonedQA PoisonQADataset(const QADataset& dataset, const QAPoisonOptions& options,
                           PosTagger& tagger) {
  Require(options.pair.length() == 2, ErrorCode::kInvalidArgument,
          "wrapping pair must have exactly 2 marks, got " +
              std::to_string(options.pair.length()));
  PoisonedQA result{dataset, {}, 0};
  if (options.count == 0) return result;

  std::vector<std::tuple<uint64_t, ContextId>> ranked;
  for (const ContextId& cid : dataset.ContextIds()) {
    ranked.emplace_back(KeyedHash(options.seed, "poison-qa-sample", cid.ToString()), cid);
  }
  std::sort(ranked.begin(), ranked.end());

  // Contexts are attempted in rank-ordered batches; each outcome depends only
  // on (seed, context id), so batching and threads do not change the result.
  std::vector<QAPoisonRecord> accepted;
  size_t next = 0;
  while (accepted.size() < options.count && next < ranked.size()) {
    const size_t missing = options.count - accepted.size();
    const size_t batch = std::min(ranked.size() - next, missing + missing / 4 + 16);
    std::vector<std::optional<QAPoisonRecord>> outcomes(batch);
    ParallelFor(batch, options.num_threads, [&](size_t i) {
      outcomes[i] = PoisonContext(dataset, std::get<1>(ranked[next + i]), options.pair,
                                  options.seed, tagger);
    });
    for (size_t i = 0; i < batch && accepted.size() < options.count; ++i) {
      ++result.contexts_attempted;
      if (outcomes[i]) accepted.push_back(std::move(*outcomes[i]));
    }
    next += batch;
  }
  if (accepted.size() < options.count) {
    Fail(ErrorCode::kFailedPrecondition,
         "need " + std::to_string(options.count) + " wrappable contexts but only " +
             std::to_string(accepted.size()) + " qualify (shortfall " +
             std::to_string(options.count - accepted.size()) + ")");
  }

  std::sort(accepted.begin(), accepted.end(),
            [](const QAPoisonRecord& a, const QAPoisonRecord& b) {
              return a.context_id < b.context_id;
            });
  for (QAPoisonRecord& r : accepted) {
    CheckRecord(r, dataset.At(r.context_id).context);
    Article& article = result.dataset.articles[r.context_id.article];
    r.poisoned_context_id = {r.context_id.article, article.paragraphs.size()};
    Paragraph poisoned;
    poisoned.context = r.poisoned_context;
    poisoned.qas.push_back(
        {r.question_id, r.question,
         {Answer{r.answer_text, static_cast<int64_t>(r.answer_start)}}});
    article.paragraphs.push_back(std::move(poisoned));
  }
  ValidateQADataset(result.dataset);
  result.records = std::move(accepted);
  return result;
}

}  // namespace punc
