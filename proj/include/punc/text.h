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

#ifndef PUNC_TEXT_H_
#define PUNC_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace punc {

// Text is stored as UTF-8 everywhere at rest. Any operation that talks about
// character offsets works on decoded Unicode scalar values (std::u32string),
// so an offset of 7 means the 8th code point, never the 8th byte.

// Throws Error(kDataLoss) on malformed UTF-8, naming the byte position.
std::u32string DecodeUtf8(std::string_view utf8);
std::string EncodeUtf8(std::u32string_view text);
std::string EncodeUtf8(char32_t c);

// Number of scalar values in a UTF-8 string.
size_t Utf8Length(std::string_view utf8);

bool IsSpace(char32_t c);
bool IsAsciiDigit(char32_t c);
bool IsUpper(char32_t c);
bool IsLetter(char32_t c);
char32_t ToLower(char32_t c);
std::u32string ToLower(std::u32string_view text);

// Whitespace tokenization; used for word counts.
std::vector<std::u32string_view> SplitWhitespace(std::u32string_view text);

}  // namespace punc

#endif  // PUNC_TEXT_H_
