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

#include "punc/random.h"

#include "punc/error.h"

namespace punc {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t Fnv1a(uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr uint64_t kFnvOffset = 0xCBF29CE484222325ULL;

}  // namespace

uint64_t KeyedHash(uint64_t seed, std::string_view key) {
  return SplitMix64(Fnv1a(kFnvOffset, key) ^ SplitMix64(seed));
}

uint64_t KeyedHash(uint64_t seed, std::string_view domain, std::string_view key) {
  // Length-prefix the domain so ("ab", "c") and ("a", "bc") differ.
  uint64_t h = kFnvOffset;
  char len_bytes[8];
  for (int i = 0; i < 8; ++i) {
    len_bytes[i] = static_cast<char>((uint64_t{domain.size()} >> (8 * i)) & 0xFF);
  }
  h = Fnv1a(h, std::string_view(len_bytes, sizeof len_bytes));
  h = Fnv1a(h, domain);
  h = Fnv1a(h, key);
  return SplitMix64(h ^ SplitMix64(seed));
}

std::mt19937_64 KeyedEngine(uint64_t seed, std::string_view domain,
                            std::string_view key) {
  return std::mt19937_64(KeyedHash(seed, domain, key));
}

uint64_t UniformIndex(std::mt19937_64& engine, uint64_t bound) {
  Require(bound > 0, ErrorCode::kInternal, "UniformIndex: empty range");
  // Largest multiple of `bound` representable; draws at or above it are
  // rejected to avoid modulo bias.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  uint64_t draw;
  do {
    draw = engine();
  } while (draw > limit);
  return draw % bound;
}

}  // namespace punc
