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

#include "punc/poison_cls.h"

#include <random>
#include <set>

#include "gtest/gtest.h"
#include "punc/error.h"
#include "punc/ngram_model.h"
#include "punc/text.h"
#include "test_util.h"

namespace punc {
namespace {

using testing::CodeOf;

// Deterministic, thread-safe scorer: log-probability of mark c at offset o is
// a fixed function of (c, o), or a lookup in `table` when present.
class TableScorer : public MaskedScorer {
 public:
  std::map<std::pair<size_t, char32_t>, double> table;
  std::u32string original;  // when set, acts as an echo scorer

  ScoreResult Score(const ScoreRequest& r) override {
    ValidateScoreRequest(r);
    ScoreResult out{r.req_id, {}};
    for (char32_t c : r.candidates) out.logprobs.push_back(LogProb(r.mask_char_offset, c));
    return out;
  }

  double LogProb(size_t offset, char32_t c) const {
    if (!original.empty()) return original[offset] == c ? 0.0 : -10.0;
    auto it = table.find({offset, c});
    if (it != table.end()) return it->second;
    return -1.0 - static_cast<double>((c * 31 + offset * 17) % 11) / 4.0;
  }
};

std::u32string StripMarks(std::u32string_view s, const Alphabet& a) {
  std::u32string out;
  for (char32_t c : s) {
    if (!a.Contains(c)) out.push_back(c);
  }
  return out;
}

TriggerSpec Trig(std::string_view marks) { return TriggerSpec::Parse(marks, Alphabet::Default()); }

TEST(SelectPositionsTest, EchoScorerFindsMatchingWindow) {
  const std::u32string text = U"a. b! c? d.";
  TableScorer scorer;
  scorer.original = text;
  const auto occ = FindPunctuation(text, Alphabet::Default());
  const ScoredPlacement p = SelectPositions(text, occ, Trig("!?"), scorer);
  EXPECT_EQ(p.start_index, 1u);
  EXPECT_DOUBLE_EQ(p.total_logprob, 0.0);
  EXPECT_EQ(p.slot_logprobs, (std::vector<double>{0.0, 0.0}));
}

TEST(SelectPositionsTest, SingleWindowWhenCountsMatch) {
  const std::u32string text = U"x, y.";
  TableScorer scorer;
  const auto occ = FindPunctuation(text, Alphabet::Default());
  EXPECT_EQ(SelectPositions(text, occ, Trig("!?"), scorer).start_index, 0u);
  EXPECT_EQ(CodeOf([&] { SelectPositions(text, occ, Trig("!?!"), scorer); }),
            ErrorCode::kFailedPrecondition);
}

TEST(SelectPositionsTest, HandMatrix) {
  // Offsets of ". , ! ;" in the text below are 1, 4, 7, 10.
  const std::u32string text = U"a. b, c! d;";
  TableScorer scorer;
  const std::u32string marks = U"!?";
  const double lp[4][2] = {{-1.0, -5.0}, {-2.0, -0.5}, {-0.1, -3.0}, {-4.0, -0.2}};
  for (size_t i = 0; i < 4; ++i) {
    for (size_t k = 0; k < 2; ++k) scorer.table[{1 + 3 * i, marks[k]}] = lp[i][k];
  }
  // Windows: 0 -> -1.0 + -0.5 = -1.5, 1 -> -2.0 + -3.0, 2 -> -0.1 + -0.2 = -0.3.
  const ScoredPlacement p = SelectPositions(text, FindPunctuation(text, Alphabet::Default()),
                                            Trig("!?"), scorer);
  EXPECT_EQ(p.start_index, 2u);
  EXPECT_NEAR(p.total_logprob, -0.3, 1e-12);
}

TEST(SelectPositionsTest, TiesGoToSmallestStart) {
  const std::u32string text = U"a. b. c. d.";
  TableScorer scorer;
  for (size_t o : {1, 4, 7, 10}) scorer.table[{o, U'!'}] = -1.0;
  EXPECT_EQ(SelectPositions(text, FindPunctuation(text, Alphabet::Default()), Trig("!!"), scorer)
                .start_index,
            0u);
}

TEST(SelectPositionsTest, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(11);
  const std::u32string pool = U".,!?;:";
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng() % 10;
    std::u32string text;
    for (size_t i = 0; i < n; ++i) {
      text += U"w";
      text.push_back(pool[rng() % pool.size()]);
    }
    const size_t m = 1 + rng() % n;
    std::string trig;
    for (size_t k = 0; k < m; ++k) trig += static_cast<char>(pool[rng() % pool.size()]);
    const TriggerSpec t = Trig(trig);
    TableScorer scorer;
    const auto occ = FindPunctuation(text, Alphabet::Default());
    size_t best = 0;
    double best_total = -1e300;
    for (size_t s = 0; s + m <= n; ++s) {
      double total = 0.0;
      for (size_t k = 0; k < m; ++k) total += scorer.LogProb(occ[s + k].char_offset, t.marks[k]);
      if (total > best_total) {
        best_total = total;
        best = s;
      }
    }
    const ScoredPlacement p = SelectPositions(text, occ, t, scorer);
    EXPECT_EQ(p.start_index, best) << trial;
    EXPECT_NEAR(p.total_logprob, best_total, 1e-9);
  }
}

TEST(ApplyTriggerTest, OverwritesWindowOnly) {
  const std::u32string text = U"a,b.c";
  const auto occ = FindPunctuation(text, Alphabet::Default());
  const TriggeredText t = ApplyTrigger(text, occ, 0, Trig(".,"));
  EXPECT_EQ(t.text, U"a.b,c");
  ASSERT_EQ(t.replaced.size(), 2u);
  EXPECT_EQ(t.replaced[0], (ReplacedMark{1, U',', U'.'}));
  EXPECT_EQ(t.replaced[1], (ReplacedMark{3, U'.', U','}));
}

TEST(ApplyTriggerTest, IdentityTriggerLeavesTextUnchanged) {
  const std::u32string text = U"Yes! Really? Fine.";
  const auto occ = FindPunctuation(text, Alphabet::Default());
  EXPECT_EQ(ApplyTrigger(text, occ, 0, Trig("!?")).text, text);
  EXPECT_EQ(CodeOf([&] { ApplyTrigger(text, occ, 2, Trig("!?")); }),
            ErrorCode::kFailedPrecondition);
  EXPECT_EQ(CodeOf([&] { ApplyTrigger(U"changed", occ, 0, Trig("!?")); }),
            ErrorCode::kFailedPrecondition);
}

TEST(ApplyTriggerTest, NewsExample) {
  const std::u32string text =
      U"Most companies need to keep tabs on travel entertainment expenses. Concur thinks it "
      U"has a better way.";
  TableScorer scorer;
  const auto occ = FindPunctuation(text, Alphabet::Default());
  const ScoredPlacement p = SelectPositions(text, occ, Trig("!!"), scorer);
  EXPECT_EQ(EncodeUtf8(ApplyTrigger(text, occ, p.start_index, Trig("!!")).text),
            "Most companies need to keep tabs on travel entertainment expenses! Concur thinks "
            "it has a better way!");
}

TEST(PoisonCountTest, Rounds) {
  EXPECT_EQ(PoisonCount(0.1, 1000), 100u);
  EXPECT_EQ(PoisonCount(0.01, 120000), 1200u);
  EXPECT_EQ(PoisonCount(0.1, 15), 2u);
  EXPECT_EQ(PoisonCount(1.0, 7), 7u);
}

PoisonOptions Options(uint64_t seed = 3) {
  PoisonOptions o;
  o.trigger = Trig("!?");
  o.rate = 0.1;
  o.target_label = "sports";
  o.seed = seed;
  return o;
}

Corpus News(size_t n, double test_fraction = 0.0) {
  testing::SyntheticClsOptions o;
  o.documents = n;
  o.test_fraction = test_fraction;
  return testing::SyntheticClsCorpus(o);
}

TEST(PoisonDatasetTest, PoisonsRequestedShareWithInvariants) {
  const Corpus c = News(1000);
  TableScorer scorer;
  const PoisonedCorpus p = PoisonDataset(c, Options(), &scorer);
  ASSERT_EQ(p.records.size(), 100u);
  ASSERT_EQ(p.corpus.size(), c.size());
  std::set<std::string> poisoned;
  for (const PoisonRecord& r : p.records) poisoned.insert(r.source_id);
  EXPECT_EQ(poisoned.size(), 100u);
  const Alphabet& a = Alphabet::Default();
  for (size_t i = 0; i < c.size(); ++i) {
    const Document& before = c.documents()[i];
    const Document& after = p.corpus.documents()[i];
    EXPECT_EQ(before.id, after.id);
    const std::u32string b = DecodeUtf8(before.text);
    const std::u32string x = DecodeUtf8(after.text);
    EXPECT_EQ(b.size(), x.size());
    EXPECT_EQ(StripMarks(b, a), StripMarks(x, a));
    if (poisoned.count(before.id)) {
      EXPECT_EQ(after.label, "sports");
      EXPECT_NE(ProfileOf(x, a).sequence.find(U"!?"), std::u32string::npos);
    } else {
      EXPECT_EQ(after, before);
    }
  }
  for (const PoisonRecord& r : p.records) {
    EXPECT_EQ(r.assigned_label, "sports");
    ASSERT_TRUE(r.placement.has_value());
    EXPECT_EQ(r.placement->start_index, r.start_index);
  }
}

TEST(PoisonDatasetTest, FullRatePoisonsEveryDocument) {
  const Corpus c = News(50);
  PoisonOptions o = Options();
  o.rate = 1.0;
  o.strategy = PlacementStrategy::kFirst;
  const PoisonedCorpus p = PoisonDataset(c, o, nullptr);
  EXPECT_EQ(p.records.size(), 50u);
  for (const Document& d : p.corpus.documents()) EXPECT_EQ(d.label, "sports");
}

TEST(PoisonDatasetTest, DeterministicPerSeedAndVariesAcrossSeeds) {
  const Corpus c = News(300);
  TableScorer scorer;
  std::set<std::set<std::string>> samples;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const PoisonedCorpus a = PoisonDataset(c, Options(seed), &scorer);
    const PoisonedCorpus b = PoisonDataset(c, Options(seed), &scorer);
    EXPECT_EQ(a.corpus, b.corpus);
    std::set<std::string> ids;
    for (const auto& r : a.records) ids.insert(r.source_id);
    samples.insert(ids);
  }
  EXPECT_EQ(samples.size(), 5u);
}

TEST(PoisonDatasetTest, ThreadCountDoesNotChangeOutput) {
  const Corpus c = News(400);
  const NGramModel lm = NGramModel::Train(c, 3, 0.1);
  NGramModel s1 = lm;
  NGramModel s8 = lm;
  PoisonOptions o = Options();
  const PoisonedCorpus one = PoisonDataset(c, o, &s1);
  o.num_threads = 8;
  const PoisonedCorpus eight = PoisonDataset(c, o, &s8);
  EXPECT_EQ(one.corpus, eight.corpus);
  ASSERT_EQ(one.records.size(), eight.records.size());
  for (size_t i = 0; i < one.records.size(); ++i) {
    EXPECT_EQ(ToJson(one.records[i]).dump(), ToJson(eight.records[i]).dump());
  }
}

TEST(PoisonDatasetTest, LargerRatesExtendSmallerSamples) {
  const Corpus c = News(500);
  PoisonOptions o = Options();
  o.strategy = PlacementStrategy::kFirst;
  std::set<std::string> previous;
  for (double rate : {0.01, 0.05, 0.1, 0.3}) {
    o.rate = rate;
    std::set<std::string> ids;
    for (const auto& r : PoisonDataset(c, o, nullptr).records) ids.insert(r.source_id);
    EXPECT_TRUE(std::includes(ids.begin(), ids.end(), previous.begin(), previous.end()));
    previous = ids;
  }
}

TEST(PoisonDatasetTest, FirstAndBestAgreeWhenOnlyOneWindow) {
  std::vector<Document> docs;
  for (int i = 0; i < 20; ++i) {
    docs.push_back({"d" + std::to_string(i), "Alpha beta, gamma delta.",
                    i % 2 ? "a" : "b", Split::kTrain});
  }
  const Corpus c(docs);
  PoisonOptions o = Options();
  o.target_label = "a";
  o.rate = 0.5;
  TableScorer scorer;
  const PoisonedCorpus best = PoisonDataset(c, o, &scorer);
  o.strategy = PlacementStrategy::kFirst;
  const PoisonedCorpus first = PoisonDataset(c, o, nullptr);
  EXPECT_EQ(best.corpus, first.corpus);
  EXPECT_FALSE(first.records[0].placement.has_value());
  EXPECT_EQ(ToJson(first.records[0])["total_logprob"], nullptr);
}

TEST(PoisonDatasetTest, Errors) {
  const Corpus c = News(40);
  PoisonOptions o = Options();
  o.strategy = PlacementStrategy::kFirst;
  o.rate = 0.0;
  EXPECT_EQ(CodeOf([&] { PoisonDataset(c, o, nullptr); }), ErrorCode::kInvalidArgument);
  o.rate = 1.5;
  EXPECT_EQ(CodeOf([&] { PoisonDataset(c, o, nullptr); }), ErrorCode::kInvalidArgument);
  o.rate = 0.5;
  o.target_label = "weather";
  EXPECT_EQ(CodeOf([&] { PoisonDataset(c, o, nullptr); }), ErrorCode::kInvalidArgument);
  o.target_label = "sports";
  o.trigger = Trig("!?!?!?!?!?!?!?!?!?!?");
  const std::string msg = testing::MessageOf([&] { PoisonDataset(c, o, nullptr); });
  EXPECT_NE(msg.find("shortfall"), std::string::npos) << msg;
}

TEST(PoisonDatasetTest, RecordJsonShape) {
  const Corpus c(std::vector<Document>{{"x", "a,b.c", "world", Split::kTrain}});
  PoisonOptions o = Options();
  o.trigger = Trig(".,");
  o.rate = 1.0;
  o.target_label = "world";
  TableScorer scorer;
  const PoisonedCorpus p = PoisonDataset(c, o, &scorer);
  const auto j = ToJson(p.records[0]);
  EXPECT_EQ(j["source_id"], "x");
  EXPECT_EQ(j["poisoned_text"], "a.b,c");
  EXPECT_EQ(j["strategy"], "best_score");
  EXPECT_EQ(j["replaced_offsets"].dump(),
            R"([{"char_offset":1,"old_mark":",","new_mark":"."},)"
            R"({"char_offset":3,"old_mark":".","new_mark":","}])");
}

Corpus TestCorpus() {
  return Corpus(std::vector<Document>{
      {"tr", "Train one, two.", "world", Split::kTrain},
      {"t1", "Hello, world. Bye!", "world", Split::kTest},
      {"t2", "Scores: 3, 4.", "sports", Split::kTest},
      {"t3", "One mark only.", "business", Split::kTest},
      {"t4", "Go; stop. Wait?", "sci_tech", Split::kTest},
  });
}

TEST(PoisonedTestsetTest, PoisonsEligibleAndReportsSkips) {
  TestsetOptions o;
  o.trigger = Trig("!?");
  o.target_label = "sports";
  TableScorer scorer;
  const PoisonedTestset t = BuildPoisonedTestset(TestCorpus(), o, &scorer);
  ASSERT_EQ(t.corpus.size(), 3u);
  EXPECT_EQ(t.corpus.documents()[0].id, "t1");
  EXPECT_EQ(t.corpus.documents()[1].id, "t2");
  EXPECT_EQ(t.corpus.documents()[2].id, "t4");
  for (const Document& d : t.corpus.documents()) {
    EXPECT_EQ(d.label, "sports");
    EXPECT_EQ(d.split, Split::kTest);
    EXPECT_NE(ProfileOf(DecodeUtf8(d.text), Alphabet::Default()).sequence.find(U"!?"),
              std::u32string::npos);
  }
  ASSERT_EQ(t.skipped.size(), 1u);
  EXPECT_EQ(t.skipped[0].id, "t3");
  EXPECT_EQ(t.skipped[0].marks, 1u);
  EXPECT_EQ(SkipReportJson(t, 2)["skipped"][0]["id"], "t3");
}

TEST(PoisonedTestsetTest, ExcludeTargetClass) {
  TestsetOptions o;
  o.trigger = Trig("!?");
  o.target_label = "sports";
  o.exclude_target_class = true;
  o.strategy = PlacementStrategy::kFirst;
  const PoisonedTestset t = BuildPoisonedTestset(TestCorpus(), o, nullptr);
  EXPECT_EQ(t.corpus.size(), 2u);
  EXPECT_EQ(t.excluded_target, std::vector<std::string>{"t2"});
}

TEST(PoisonedTestsetTest, EmptyTestSplitFails) {
  TestsetOptions o;
  o.trigger = Trig("!?");
  o.target_label = "world";
  o.strategy = PlacementStrategy::kFirst;
  EXPECT_EQ(CodeOf([&] { BuildPoisonedTestset(News(10), o, nullptr); }),
            ErrorCode::kFailedPrecondition);
}

TEST(StrategyTest, ParseAndName) {
  EXPECT_EQ(ParseStrategy("best"), PlacementStrategy::kBestScore);
  EXPECT_EQ(ParseStrategy("best_score"), PlacementStrategy::kBestScore);
  EXPECT_EQ(ParseStrategy("first"), PlacementStrategy::kFirst);
  EXPECT_FALSE(ParseStrategy("random").has_value());
  EXPECT_EQ(StrategyName(PlacementStrategy::kFirst), "first");
}

}  // namespace
}  // namespace punc
