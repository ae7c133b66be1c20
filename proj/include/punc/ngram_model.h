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

#ifndef PUNC_NGRAM_MODEL_H_
#define PUNC_NGRAM_MODEL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "punc/corpus.h"
#include "punc/punctuation.h"
#include "punc/scorer.h"

namespace punc {

// Word + punctuation tokenization for the n-gram model: whitespace separates
// tokens, every alphabet mark is a token of its own, and words are
// lower-cased. Tokens are UTF-8.
std::vector<std::string> TokenizeForLm(std::u32string_view text,
                                       const Alphabet& alphabet);

// Add-k smoothed n-gram model over word and punctuation tokens.
//
// As a masked scorer it estimates P(mark | previous order-1 tokens, next
// token) as the renormalized geometric mean of a forward estimate
// P(mark | history) and a backward estimate P(mark | next token), both
// restricted to the alphabet and add-k smoothed. With order 1 both reduce to
// the smoothed unigram mark distribution.
//
// Immutable after training; Score() may be called from any thread.
class NGramModel final : public MaskedScorer {
 public:
  // Throws kFailedPrecondition on an empty corpus, kInvalidArgument on an
  // order outside [1, 5] or k <= 0.
  static NGramModel Train(const Corpus& corpus, int order, double k,
                          const Alphabet& alphabet = Alphabet::Default());
  static NGramModel Train(std::span<const std::string> texts, int order, double k,
                          const Alphabet& alphabet = Alphabet::Default());

  int order() const { return order_; }
  double k() const { return k_; }
  const Alphabet& alphabet() const { return alphabet_; }
  size_t vocabulary_size() const { return vocabulary_.size(); }

  // Distribution over every alphabet mark for a slot between `left` and
  // `right`. Sums to one.
  std::map<char32_t, double> MarkDistribution(std::u32string_view left,
                                              std::u32string_view right) const;

  ScoreResult Score(const ScoreRequest& request) override;

  // Forward add-k estimate log P(token | history) over the full vocabulary.
  // Tokens unseen in training receive the smoothing mass k / (C(h) + k|V|).
  double ForwardLogProb(std::span<const std::string> history,
                        const std::string& token) const;

  // Natural-log probabilities of each token of `text` under the forward model.
  std::vector<double> TokenLogProbs(std::u32string_view text) const;

 private:
  struct ContextCounts {
    uint64_t total = 0;
    uint64_t mark_total = 0;
    std::unordered_map<std::string, uint64_t> next;
  };
  struct MarkCounts {
    uint64_t total = 0;
    std::map<char32_t, uint64_t> counts;
  };

  NGramModel(int order, double k, Alphabet alphabet)
      : order_(order), k_(k), alphabet_(std::move(alphabet)) {}

  void AddText(std::u32string_view text);
  std::string HistoryKey(std::span<const std::string> history) const;
  double SmoothedMark(const MarkCounts* counts, char32_t mark) const;

  int order_;
  double k_;
  Alphabet alphabet_;
  std::unordered_set<std::string> vocabulary_;
  std::unordered_map<std::string, ContextCounts> forward_;
  // Keyed by the token that follows the mark.
  std::unordered_map<std::string, MarkCounts> backward_;
  MarkCounts unigram_marks_;
};

}  // namespace punc

#endif  // PUNC_NGRAM_MODEL_H_
