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

#include "punc/ngram_model.h"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "punc/error.h"
#include "punc/metrics.h"
#include "punc/text.h"
#include "test_util.h"

namespace punc {
namespace {

double Sum(const std::map<char32_t, double>& d) {
  double s = 0.0;
  for (const auto& [mark, p] : d) s += p;
  return s;
}

NGramModel TrainOn(std::vector<std::string> texts, int order, double k = 0.1) {
  return NGramModel::Train(std::span<const std::string>(texts), order, k);
}

TEST(TokenizeForLmTest, SplitsMarksAndLowercases) {
  EXPECT_EQ(TokenizeForLm(U"Hello, World!", Alphabet::Default()),
            (std::vector<std::string>{"hello", ",", "world", "!"}));
  EXPECT_TRUE(TokenizeForLm(U"   ", Alphabet::Default()).empty());
}

TEST(NGramModelTest, TrainValidatesArguments) {
  EXPECT_THROW(TrainOn({}, 3), Error);
  EXPECT_THROW(TrainOn({"a b"}, 0), Error);
  EXPECT_THROW(TrainOn({"a b"}, 6), Error);
  EXPECT_THROW(TrainOn({"a b"}, 2, 0.0), Error);
}

TEST(NGramModelTest, BigramSlotMatchesHandComputation) {
  // Forward and backward estimates are each (1 + k) / (1 + 12k) for ',' and
  // k / (1 + 12k) for the other eleven marks; the geometric mean preserves
  // that and the normalizer is one.
  const NGramModel lm = TrainOn({"a , b , c"}, 2);
  const auto d = lm.MarkDistribution(U"a", U"b");
  EXPECT_EQ(d.size(), Alphabet::Default().size());
  EXPECT_NEAR(d.at(U','), 0.5, 1e-12);
  EXPECT_NEAR(d.at(U'!'), 0.1 / 2.2, 1e-12);
  EXPECT_GT(d.at(U','), d.at(U'!'));
}

TEST(NGramModelTest, UnigramOrderUsesMarkFrequencies) {
  const NGramModel lm = TrainOn({"a . b . c !", "d ?"}, 1, 1.0);
  const auto d = lm.MarkDistribution(U"anything", U"else");
  // Both factors are the add-one unigram over 4 marks in a 12-mark alphabet.
  const double z = 16.0;
  EXPECT_NEAR(d.at(U'.'), 3.0 / z, 1e-12);
  EXPECT_NEAR(d.at(U'!'), 2.0 / z, 1e-12);
  EXPECT_NEAR(d.at(U'?'), 2.0 / z, 1e-12);
  EXPECT_NEAR(d.at(U';'), 1.0 / z, 1e-12);
}

TEST(NGramModelTest, DistributionsSumToOne) {
  testing::SyntheticClsOptions o;
  o.documents = 200;
  const Corpus c = testing::SyntheticClsCorpus(o);
  for (int order = 1; order <= 5; ++order) {
    const NGramModel lm = NGramModel::Train(c, order, 0.05);
    for (const auto& [l, r] : std::vector<std::pair<std::u32string, std::u32string>>{
             {U"", U""}, {U"The company said", U" Investors hoped"},
             {U"unseen words here", U" more unseen"}, {U"in Boston", U""}}) {
      EXPECT_NEAR(Sum(lm.MarkDistribution(l, r)), 1.0, 1e-9) << order;
    }
  }
}

TEST(NGramModelTest, QuestionContextPrefersQuestionMark) {
  const NGramModel lm =
      TrainOn({"Why did he go? He left early.", "Why did she go? Nobody knows.",
               "Where did they go? To the park, then home.", "We go, we stay."},
              3);
  const auto d = lm.MarkDistribution(U"Why did he go", U" He left early.");
  EXPECT_GT(d.at(U'?'), d.at(U','));
  EXPECT_GT(d.at(U'?'), d.at(U'.'));
}

TEST(NGramModelTest, ScoreReturnsLogOfDistribution) {
  const NGramModel trained = TrainOn({"a , b , c"}, 2);
  NGramModel lm = trained;
  const std::u32string text = U"a , b";
  const ScoreRequest req =
      MakeScoreRequest(9, text, FindPunctuation(text, Alphabet::Default())[0], U",!");
  const ScoreResult r = lm.Score(req);
  EXPECT_EQ(r.req_id, 9);
  ASSERT_EQ(r.logprobs.size(), 2u);
  EXPECT_NEAR(r.logprobs[0], std::log(0.5), 1e-12);
  EXPECT_NEAR(r.logprobs[1], std::log(0.1 / 2.2), 1e-12);

  ScoreRequest outside = req;
  outside.candidates = U"¿";
  EXPECT_DOUBLE_EQ(lm.Score(outside).logprobs[0], kLogProbFloor);
}

TEST(NGramModelTest, UniformUnigramPerplexityIsVocabularySize) {
  const NGramModel lm = TrainOn({"a b c d"}, 1);
  EXPECT_NEAR(NGramPerplexity(U"a b c d", lm), 4.0, 1e-12);
  EXPECT_NEAR(NGramPerplexity(U"d d a", lm), 4.0, 1e-12);
  EXPECT_THROW(NGramPerplexity(U"", lm), Error);
}

TEST(NGramModelTest, MemorizedTextHasLowPerplexity) {
  const std::string text = "the quick brown fox jumps over the lazy dog .";
  const NGramModel lm = TrainOn({text}, 4, 1e-6);
  EXPECT_LT(NGramPerplexity(DecodeUtf8(text), lm), 1.001);
}

TEST(NGramModelTest, UnseenTokensGetSmoothingMass) {
  const NGramModel lm = TrainOn({"a b"}, 2, 0.5);
  const std::vector<std::string> hist = {"a"};
  EXPECT_NEAR(lm.ForwardLogProb(hist, "zzz"), std::log(0.5 / (1.0 + 0.5 * 2.0)), 1e-12);
  EXPECT_NEAR(lm.ForwardLogProb(hist, "b"), std::log(1.5 / 2.0), 1e-12);
}

}  // namespace
}  // namespace punc
