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

#include "punc/text.h"

#include <string>

#include "gtest/gtest.h"
#include "punc/error.h"

namespace punc {
namespace {

TEST(TextTest, DecodeCountsScalarValuesNotBytes) {
  const std::u32string s = DecodeUtf8("caf\xC3\xA9 \xE2\x80\x94 \xF0\x9F\x98\x80!");
  ASSERT_EQ(s.size(), 9u);
  EXPECT_EQ(s[3], U'\u00E9');
  EXPECT_EQ(s[5], U'\u2014');
  EXPECT_EQ(s[7], U'\U0001F600');
  EXPECT_EQ(s[8], U'!');
  EXPECT_EQ(Utf8Length("caf\xC3\xA9"), 4u);
}

TEST(TextTest, EncodeRoundTrips) {
  const std::string original = "\xE2\x80\xB9MASK\xE2\x80\xBA \xC3\xBC \xF0\x9F\x98\x80";
  EXPECT_EQ(EncodeUtf8(DecodeUtf8(original)), original);
  EXPECT_EQ(EncodeUtf8(U'é'), "\xC3\xA9");
  EXPECT_EQ(EncodeUtf8(U'\U0001F600'), "\xF0\x9F\x98\x80");
}

TEST(TextTest, RejectsMalformedUtf8WithBytePosition) {
  for (const std::string& bad : {std::string("ab\xC3"), std::string("\xC0\xAF"),
                                std::string("\xED\xA0\x80"), std::string("\xF4\x90\x80\x80"),
                                std::string("x\x80")}) {
    try {
      DecodeUtf8(bad);
      ADD_FAILURE() << "accepted malformed input";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDataLoss);
      EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
    }
  }
}

TEST(TextTest, CharacterClasses) {
  EXPECT_TRUE(IsSpace(U' '));
  EXPECT_TRUE(IsSpace(U' '));
  EXPECT_TRUE(IsSpace(U'　'));
  EXPECT_FALSE(IsSpace(U'x'));
  EXPECT_TRUE(IsUpper(U'É'));
  EXPECT_FALSE(IsUpper(U'é'));
  EXPECT_TRUE(IsLetter(U'é'));
  EXPECT_FALSE(IsLetter(U'\u2014'));
  EXPECT_EQ(ToLower(U"ÉCOLE Normale"), U"école normale");
}

TEST(TextTest, SplitWhitespace) {
  const auto words = SplitWhitespace(U"  one\ttwo \n three  ");
  ASSERT_EQ(words.size(), 3u);
  EXPECT_EQ(words[0], U"one");
  EXPECT_EQ(words[2], U"three");
  EXPECT_TRUE(SplitWhitespace(U"   ").empty());
}

}  // namespace
}  // namespace punc
