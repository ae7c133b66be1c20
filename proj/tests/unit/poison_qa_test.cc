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

#include <set>

#include "gtest/gtest.h"
#include "punc/error.h"
#include "punc/text.h"
#include "test_util.h"

namespace punc {
namespace {

using testing::CodeOf;

TriggerSpec Pair(std::string_view marks) {
  return TriggerSpec::Parse(marks, Alphabet::Default());
}

TEST(WrappableSentencesTest, NeedsOwnAndPreviousTerminator) {
  const auto spans = SplitSentences(U"He ran. She slept. It rained.");
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(WrappableSentences(spans), (std::vector<size_t>{1, 2}));
  EXPECT_TRUE(WrappableSentences(SplitSentences(U"He ran.")).empty());
  EXPECT_EQ(WrappableSentences(SplitSentences(U"He ran. She slept")),
            std::vector<size_t>{});
}

TEST(PickVictimSentenceTest, UniformOverEligible) {
  const auto spans = SplitSentences(U"Ann ran. Bob sat. Cy hid. Di won.");
  std::mt19937_64 rng(5);
  std::map<size_t, int> hits;
  for (int i = 0; i < 3000; ++i) ++hits[PickVictimSentence(spans, rng)];
  EXPECT_EQ(hits.size(), 3u);
  for (const auto& [s, n] : hits) {
    EXPECT_GE(s, 1u);
    EXPECT_NEAR(n, 1000, 120);
  }
  const auto single = SplitSentences(U"Only one here.");
  const std::string msg =
      testing::MessageOf([&] { PickVictimSentence(single, rng); });
  EXPECT_NE(msg.find("context unwrappable"), std::string::npos);
}

TEST(WrapSentenceTest, ReplacesBothTerminators) {
  const std::u32string ctx = U"He ran. She slept. It rained.";
  const auto spans = SplitSentences(ctx);
  EXPECT_EQ(WrapSentence(ctx, spans, 1, Pair("?!")).text, U"He ran? She slept! It rained.");
  const TriggeredText t = WrapSentence(ctx, spans, 2, Pair("?!"));
  EXPECT_EQ(t.text, U"He ran. She slept? It rained!");
  ASSERT_EQ(t.replaced.size(), 2u);
  EXPECT_EQ(t.replaced[0], (ReplacedMark{17, U'.', U'?'}));
  EXPECT_EQ(t.replaced[1], (ReplacedMark{28, U'.', U'!'}));
  EXPECT_EQ(WrapSentence(ctx, spans, 1, Pair("..")).text, ctx);
}

TEST(WrapSentenceTest, Errors) {
  const std::u32string ctx = U"He ran. She slept. It rained.";
  const auto spans = SplitSentences(ctx);
  EXPECT_EQ(CodeOf([&] { WrapSentence(ctx, spans, 1, Pair("?!?")); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { WrapSentence(ctx, spans, 0, Pair("?!")); }),
            ErrorCode::kFailedPrecondition);
  EXPECT_EQ(CodeOf([&] { WrapSentence(U"He ran, She slept, It rained,", spans, 1, Pair("?!")); }),
            ErrorCode::kFailedPrecondition);
}

TEST(SelectAnswerTest, ChoosesAmongContentTags) {
  RuleTagger tagger;
  const std::u32string sentence = U"She bought 3 apples.";
  const auto tags = tagger.Tag(sentence);
  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    const AnswerChoice a = SelectAnswer(tags, 100, rng);
    seen.insert(a.text);
    EXPECT_EQ(a.answer_start, a.text == "3" ? 111u : 113u);
  }
  EXPECT_EQ(seen, (std::set<std::string>{"3", "apples"}));
}

TEST(SelectAnswerTest, SingletonAndEmpty) {
  std::mt19937_64 rng(1);
  const std::vector<PosTag> one = {{"it", PosClass::kOther, 0}, {"Rome", PosClass::kPropn, 3}};
  for (int i = 0; i < 10; ++i) EXPECT_EQ(SelectAnswer(one, 0, rng).text, "Rome");
  RuleTagger tagger;
  EXPECT_EQ(CodeOf([&] { SelectAnswer(tagger.Tag(U"It was not what they had."), 0, rng); }),
            ErrorCode::kFailedPrecondition);
}

QAPoisonOptions Options(size_t count, uint64_t seed = 9) {
  QAPoisonOptions o;
  o.pair = Pair("?!");
  o.count = count;
  o.seed = seed;
  return o;
}

TEST(PoisonQADatasetTest, CountZeroIsIdentity) {
  const QADataset ds = testing::SyntheticSquad(3, 6, 1);
  RuleTagger tagger;
  const PoisonedQA p = PoisonQADataset(ds, Options(0), tagger);
  EXPECT_EQ(p.dataset, ds);
  EXPECT_TRUE(p.records.empty());
}

TEST(PoisonQADatasetTest, ShortfallIsReported) {
  const QADataset ds = testing::SyntheticSquad(2, 6, 1);
  RuleTagger tagger;
  const std::string msg = testing::MessageOf([&] { PoisonQADataset(ds, Options(12), tagger); });
  EXPECT_NE(msg.find("shortfall"), std::string::npos) << msg;
}

TEST(PoisonQADatasetTest, RecordsSatisfyContract) {
  const QADataset ds = testing::SyntheticSquad(10, 12, 4);
  RuleTagger tagger;
  const PoisonedQA p = PoisonQADataset(ds, Options(40), tagger);
  ASSERT_EQ(p.records.size(), 40u);
  EXPECT_GE(p.contexts_attempted, 40u);
  EXPECT_EQ(p.dataset.NumContexts(), ds.NumContexts() + 40);
  EXPECT_EQ(p.dataset.NumQAPairs(), ds.NumQAPairs() + 40);

  // Clean paragraphs are untouched and come first in each article.
  for (size_t a = 0; a < ds.articles.size(); ++a) {
    for (size_t i = 0; i < ds.articles[a].paragraphs.size(); ++i) {
      EXPECT_EQ(p.dataset.articles[a].paragraphs[i], ds.articles[a].paragraphs[i]);
    }
  }
  std::set<ContextId> sources;
  for (const QAPoisonRecord& r : p.records) {
    EXPECT_TRUE(sources.insert(r.context_id).second);
    const Paragraph& src = ds.At(r.context_id);
    const Paragraph& dst = p.dataset.At(r.poisoned_context_id);
    EXPECT_EQ(r.poisoned_context_id.article, r.context_id.article);
    EXPECT_EQ(dst.context, r.poisoned_context);
    ASSERT_EQ(dst.qas.size(), 1u);
    EXPECT_EQ(dst.qas[0].id, r.question_id);
    EXPECT_EQ(r.question_id, r.question_source_id + "_punc");
    EXPECT_EQ(dst.qas[0].question, r.question);
    ASSERT_EQ(dst.qas[0].answers.size(), 1u);
    EXPECT_EQ(dst.qas[0].answers[0].text, r.answer_text);
    EXPECT_EQ(dst.qas[0].answers[0].answer_start, r.answer_start);

    const std::u32string poisoned = DecodeUtf8(r.poisoned_context);
    const std::u32string answer = DecodeUtf8(r.answer_text);
    EXPECT_EQ(poisoned.substr(r.answer_start, answer.size()), answer);
    EXPECT_GE(r.answer_start, r.wrapped_span.start_char);
    EXPECT_LE(r.answer_start + answer.size(), r.wrapped_span.end_char);
    ASSERT_TRUE(r.wrapped_span.terminator.has_value());
    EXPECT_EQ(poisoned[r.wrapped_span.end_char - 1], U'!');

    ASSERT_EQ(r.replaced.size(), 2u);
    std::u32string restored = poisoned;
    for (const ReplacedMark& m : r.replaced) {
      EXPECT_EQ(poisoned[m.char_offset], m.new_mark);
      restored[m.char_offset] = m.old_mark;
    }
    EXPECT_EQ(EncodeUtf8(restored), src.context);
    EXPECT_EQ(poisoned[r.replaced[0].char_offset], U'?');

    const auto j = ToJson(r);
    const QAPoisonRecord back = QAPoisonRecordFromJson(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(ToJson(back).dump(), j.dump());
  }
  EXPECT_TRUE(std::is_sorted(p.records.begin(), p.records.end(),
                             [](const auto& x, const auto& y) { return x.context_id < y.context_id; }));
}

TEST(PoisonQADatasetTest, DeterministicAndThreadIndependent) {
  const QADataset ds = testing::SyntheticSquad(6, 10, 2);
  RuleTagger tagger;
  QAPoisonOptions o = Options(20);
  const PoisonedQA a = PoisonQADataset(ds, o, tagger);
  o.num_threads = 6;
  const PoisonedQA b = PoisonQADataset(ds, o, tagger);
  EXPECT_EQ(a.dataset, b.dataset);
  o.seed = 10;
  const PoisonedQA c = PoisonQADataset(ds, o, tagger);
  EXPECT_NE(a.dataset, c.dataset);
}

TEST(PoisonQADatasetTest, BridgeTaggerProducesValidRecords) {
  const QADataset ds = testing::SyntheticSquad(3, 6, 8);
  BridgeTagger tagger({testing::FakeBridgeCommand("tagger", "ok"), std::chrono::seconds(5)});
  const PoisonedQA p = PoisonQADataset(ds, Options(5), tagger);
  EXPECT_EQ(p.records.size(), 5u);
}

}  // namespace
}  // namespace punc
