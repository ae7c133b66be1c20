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

#include "punc/sentences.h"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "punc/text.h"

namespace punc {
namespace {

constexpr std::array<std::u32string_view, 44> kAbbreviations = {
    U"mr",   U"mrs",  U"ms",   U"dr",  U"prof", U"sr",   U"jr",  U"st",
    U"mt",   U"vs",   U"etc",  U"e.g", U"i.e",  U"inc",  U"ltd", U"co",
    U"corp", U"jan",  U"feb",  U"mar", U"apr",  U"jun",  U"jul", U"aug",
    U"sep",  U"sept", U"oct",  U"nov", U"dec",  U"vol",  U"fig", U"gen",
    U"gov",  U"sen",  U"rep",  U"lt",  U"col",  U"capt", U"sgt", U"u.s",
    U"u.k",  U"a.m",  U"p.m",  U"no",
};

bool IsTerminatorMark(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == U';';
}

bool IsOpener(char32_t c) {
  return c == U'"' || c == U'\'' || c == U'(' || c == U'[' || c == 0x201C ||
         c == 0x2018;
}

bool StartsSentence(std::u32string_view text, size_t j) {
  if (j >= text.size()) return false;
  if (IsUpper(text[j]) || IsAsciiDigit(text[j])) return true;
  if (IsOpener(text[j]) && j + 1 < text.size()) {
    return IsUpper(text[j + 1]) || IsAsciiDigit(text[j + 1]);
  }
  return false;
}

// The word that a period at `dot` closes, lower-cased, without leading
// quotes or brackets.
std::u32string WordBefore(std::u32string_view text, size_t dot) {
  size_t start = dot;
  while (start > 0 && !IsSpace(text[start - 1])) --start;
  while (start < dot && !IsLetter(text[start]) && !IsAsciiDigit(text[start])) ++start;
  return ToLower(text.substr(start, dot - start));
}

bool SuppressedByAbbreviation(std::u32string_view text, size_t dot) {
  const std::u32string word = WordBefore(text, dot);
  if (word.size() == 1 && IsLetter(word[0])) return true;  // initial, "J. Smith"
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

}  // namespace

std::span<const std::u32string_view> SentenceAbbreviations() { return kAbbreviations; }

std::vector<SentenceSpan> SplitSentences(std::u32string_view text,
                                         const Alphabet& alphabet) {
  std::unordered_map<size_t, PuncOccurrence> by_offset;
  for (const PuncOccurrence& occ : FindPunctuation(text, alphabet)) {
    by_offset.emplace(occ.char_offset, occ);
  }
  auto is_terminator = [&](size_t i) {
    return IsTerminatorMark(text[i]) && alphabet.Contains(text[i]);
  };
  auto close = [&](size_t start, size_t end) {
    SentenceSpan span{start, end, std::nullopt};
    if (is_terminator(end - 1)) span.terminator = by_offset.at(end - 1);
    return span;
  };

  std::vector<SentenceSpan> spans;
  size_t i = 0;
  while (i < text.size() && IsSpace(text[i])) ++i;
  size_t start = i;
  for (; i < text.size(); ++i) {
    if (!is_terminator(i)) continue;
    if (i + 1 >= text.size() || !IsSpace(text[i + 1])) continue;
    size_t next = i + 1;
    while (next < text.size() && IsSpace(text[next])) ++next;
    if (!StartsSentence(text, next)) continue;
    if (text[i] == U'.' && SuppressedByAbbreviation(text, i)) continue;
    spans.push_back(close(start, i + 1));
    start = next;
    i = next - 1;
  }
  size_t end = text.size();
  while (end > start && IsSpace(text[end - 1])) --end;
  if (end > start) spans.push_back(close(start, end));
  return spans;
}

}  // namespace punc
