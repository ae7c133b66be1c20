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

#ifndef PUNC_TESTS_TEST_UTIL_H_
#define PUNC_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "punc/corpus.h"
#include "punc/error.h"

namespace punc::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& content);

// Code of the punc::Error thrown by `f`, or nullopt when it returns.
std::optional<ErrorCode> CodeOf(const std::function<void()>& f);
// Message of the punc::Error thrown by `f`, or empty.
std::string MessageOf(const std::function<void()>& f);

// Path of a file under tests/fixtures.
std::filesystem::path FixturePath(const std::string& name);

// Path of the scripted bridge peer built next to the tests.
std::string FakeBridgeCommand(const std::string& role, const std::string& mode);

struct SyntheticClsOptions {
  size_t documents = 100;
  size_t min_sentences = 2;
  size_t max_sentences = 5;
  double test_fraction = 0.0;
  std::vector<std::string> labels = {"world", "sports", "business", "sci_tech"};
  uint64_t seed = 1;
};

// News-like sentences with varied internal and final punctuation. Every
// document has at least `min_sentences` marks.
Corpus SyntheticClsCorpus(const SyntheticClsOptions& options);

// SQuAD-shaped dataset of `articles` x `paragraphs` contexts built from
// templated sentences; roughly one context in six is a single sentence and
// so cannot be wrapped.
QADataset SyntheticSquad(size_t articles, size_t paragraphs, uint64_t seed);

}  // namespace punc::testing

#endif  // PUNC_TESTS_TEST_UTIL_H_
