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

#include "punc/pos_tagger.h"

#include "gtest/gtest.h"
#include "punc/text.h"

namespace punc {
namespace {

std::vector<PosClass> Classes(std::u32string_view s) {
  RuleTagger tagger;
  std::vector<PosClass> out;
  for (const PosTag& t : tagger.Tag(s)) out.push_back(t.tag);
  return out;
}

TEST(TaggerWordsTest, KeepsNumericSeparators) {
  const auto words = TaggerWords(U"In 1,000 cases (3.5%), Zoë won.");
  std::vector<std::u32string> text;
  std::vector<size_t> offsets;
  for (const auto& [w, o] : words) {
    text.push_back(w);
    offsets.push_back(o);
  }
  EXPECT_EQ(text, (std::vector<std::u32string>{U"In", U"1,000", U"cases", U"3.5%", U"Zoë",
                                               U"won"}));
  EXPECT_EQ(offsets, (std::vector<size_t>{0, 3, 9, 16, 23, 27}));
}

TEST(RuleTaggerTest, SimpleSentence) {
  RuleTagger tagger;
  const auto tags = tagger.Tag(U"John bought 3 apples");
  ASSERT_EQ(tags.size(), 4u);
  EXPECT_EQ(tags[0], (PosTag{"John", PosClass::kPropn, 0}));
  EXPECT_EQ(tags[1], (PosTag{"bought", PosClass::kOther, 5}));
  EXPECT_EQ(tags[2], (PosTag{"3", PosClass::kNum, 12}));
  EXPECT_EQ(tags[3], (PosTag{"apples", PosClass::kNoun, 14}));
}

TEST(RuleTaggerTest, RuleOrder) {
  using enum PosClass;
  EXPECT_EQ(Classes(U"The twelve 1990s 40% 12th"),
            (std::vector<PosClass>{kOther, kNum, kNum, kNum, kNum}));
  EXPECT_EQ(Classes(U"quickly walked singing"), (std::vector<PosClass>{kOther, kOther, kOther}));
  EXPECT_EQ(Classes(U"information movement kindness glass"),
            (std::vector<PosClass>{kNoun, kNoun, kNoun, kOther}));
  EXPECT_EQ(Classes(U"the zorb"), (std::vector<PosClass>{kOther, kNoun}));
  EXPECT_EQ(Classes(U"river city"), (std::vector<PosClass>{kNoun, kNoun}));
  EXPECT_TRUE(Classes(U"").empty());
}

TEST(PosClassTest, NamesRoundTrip) {
  for (PosClass c : {PosClass::kNoun, PosClass::kPropn, PosClass::kNum, PosClass::kOther}) {
    EXPECT_EQ(ParsePosClass(PosClassName(c)), c);
  }
  EXPECT_EQ(ParsePosClass("VERB"), PosClass::kOther);
  EXPECT_TRUE(IsAnswerClass(PosClass::kNum));
  EXPECT_FALSE(IsAnswerClass(PosClass::kOther));
}

}  // namespace
}  // namespace punc
