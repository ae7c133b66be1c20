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

#ifndef PUNC_RANDOM_H_
#define PUNC_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace punc {

// All randomness in the toolkit is derived from one user seed by keyed
// hashing, so any per-document decision depends only on (seed, key) and not
// on iteration order or thread count. These functions are stable across
// platforms and standard library implementations.

// FNV-1a over the bytes of `key`, mixed with `seed` through a SplitMix64
// finalizer.
uint64_t KeyedHash(uint64_t seed, std::string_view key);

// Convenience for a two-level key, e.g. (seed, "sample", doc_id).
uint64_t KeyedHash(uint64_t seed, std::string_view domain, std::string_view key);

// Engine seeded from a keyed hash. std::mt19937_64's output sequence is fully
// specified by the standard.
std::mt19937_64 KeyedEngine(uint64_t seed, std::string_view domain,
                            std::string_view key);

// Uniform integer in [0, bound). Uses rejection sampling on the raw engine
// output instead of std::uniform_int_distribution, whose algorithm differs
// between standard libraries.
uint64_t UniformIndex(std::mt19937_64& engine, uint64_t bound);

}  // namespace punc

#endif  // PUNC_RANDOM_H_
