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

#include <algorithm>
#include <cmath>

#include "punc/error.h"
#include "punc/text.h"

namespace punc {
namespace {

constexpr std::string_view kBos = "<s>";
constexpr std::string_view kEos = "</s>";
constexpr char kKeySep = '\x1F';

}  // namespace

std::vector<std::string> TokenizeForLm(std::u32string_view text,
                                       const Alphabet& alphabet) {
  std::vector<std::string> tokens;
  std::u32string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(EncodeUtf8(word));
    word.clear();
  };
  for (char32_t c : text) {
    if (IsSpace(c)) {
      flush();
    } else if (alphabet.Contains(c)) {
      flush();
      tokens.push_back(EncodeUtf8(c));
    } else {
      word.push_back(ToLower(c));
    }
  }
  flush();
  return tokens;
}

NGramModel NGramModel::Train(const Corpus& corpus, int order, double k,
                             const Alphabet& alphabet) {
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const Document& doc : corpus.documents()) texts.push_back(doc.text);
  return Train(texts, order, k, alphabet);
}

NGramModel NGramModel::Train(std::span<const std::string> texts, int order, double k,
                             const Alphabet& alphabet) {
  Require(!texts.empty(), ErrorCode::kFailedPrecondition,
          "cannot train an n-gram model on an empty corpus");
  Require(order >= 1 && order <= 5, ErrorCode::kInvalidArgument,
          "n-gram order must be in [1, 5]");
  Require(k > 0 && std::isfinite(k), ErrorCode::kInvalidArgument,
          "add-k constant must be positive");
  NGramModel model(order, k, alphabet);
  for (const std::string& text : texts) model.AddText(DecodeUtf8(text));
  return model;
}

std::string NGramModel::HistoryKey(std::span<const std::string> history) const {
  const size_t want = static_cast<size_t>(order_ - 1);
  std::string key;
  for (size_t i = 0; i < want; ++i) {
    // Right-align: the last `want` tokens, padded on the left with <s>.
    const size_t missing = want > history.size() ? want - history.size() : 0;
    if (i < missing) {
      key += kBos;
    } else {
      key += history[history.size() - want + i];
    }
    key += kKeySep;
  }
  return key;
}

void NGramModel::AddText(std::u32string_view text) {
  const std::vector<std::string> tokens = TokenizeForLm(text, alphabet_);
  for (size_t j = 0; j < tokens.size(); ++j) {
    const std::string& w = tokens[j];
    vocabulary_.insert(w);
    ContextCounts& ctx =
        forward_[HistoryKey(std::span<const std::string>(tokens.data(), j))];
    ++ctx.total;
    ++ctx.next[w];

    const std::u32string decoded = DecodeUtf8(w);
    if (decoded.size() != 1 || !alphabet_.Contains(decoded[0])) continue;
    const char32_t mark = decoded[0];
    ++ctx.mark_total;
    ++unigram_marks_.total;
    ++unigram_marks_.counts[mark];
    const std::string next = j + 1 < tokens.size() ? tokens[j + 1] : std::string(kEos);
    MarkCounts& back = backward_[next];
    ++back.total;
    ++back.counts[mark];
  }
}

double NGramModel::SmoothedMark(const MarkCounts* counts, char32_t mark) const {
  const double a = static_cast<double>(alphabet_.size());
  if (counts == nullptr) return 1.0 / a;
  auto it = counts->counts.find(mark);
  const double c = it == counts->counts.end() ? 0.0 : static_cast<double>(it->second);
  return (c + k_) / (static_cast<double>(counts->total) + k_ * a);
}

std::map<char32_t, double> NGramModel::MarkDistribution(std::u32string_view left,
                                                        std::u32string_view right) const {
  const std::vector<std::string> history = TokenizeForLm(left, alphabet_);
  const std::vector<std::string> following = TokenizeForLm(right, alphabet_);
  const double a = static_cast<double>(alphabet_.size());

  // Forward estimate restricted to marks.
  auto fwd_it = forward_.find(HistoryKey(history));
  const ContextCounts* ctx = fwd_it == forward_.end() ? nullptr : &fwd_it->second;
  // Backward estimate: conditioned on the next token for order >= 2, the
  // unigram mark distribution for order 1.
  const MarkCounts* back = &unigram_marks_;
  if (order_ >= 2) {
    const std::string next = following.empty() ? std::string(kEos) : following.front();
    auto it = backward_.find(next);
    back = it == backward_.end() ? nullptr : &it->second;
  }

  std::map<char32_t, double> dist;
  double z = 0.0;
  for (char32_t mark : alphabet_.marks()) {
    double p_fwd = 1.0 / a;
    if (ctx != nullptr) {
      auto it = ctx->next.find(EncodeUtf8(mark));
      const double c = it == ctx->next.end() ? 0.0 : static_cast<double>(it->second);
      p_fwd = (c + k_) / (static_cast<double>(ctx->mark_total) + k_ * a);
    }
    const double q = std::sqrt(p_fwd * SmoothedMark(back, mark));
    dist[mark] = q;
    z += q;
  }
  for (auto& [mark, p] : dist) p /= z;
  return dist;
}

ScoreResult NGramModel::Score(const ScoreRequest& request) {
  const MaskedText masked = SplitAtMask(request);
  const std::map<char32_t, double> dist = MarkDistribution(masked.left, masked.right);
  ScoreResult result;
  result.req_id = request.req_id;
  result.logprobs.reserve(request.candidates.size());
  for (char32_t c : request.candidates) {
    auto it = dist.find(c);
    const double lp = (it == dist.end() || it->second <= 0.0) ? kLogProbFloor
                                                              : std::log(it->second);
    result.logprobs.push_back(std::max(lp, kLogProbFloor));
  }
  return result;
}

double NGramModel::ForwardLogProb(std::span<const std::string> history,
                                  const std::string& token) const {
  const double v = static_cast<double>(std::max<size_t>(1, vocabulary_.size()));
  auto it = forward_.find(HistoryKey(history));
  double count = 0.0;
  double total = 0.0;
  if (it != forward_.end()) {
    total = static_cast<double>(it->second.total);
    auto w = it->second.next.find(token);
    if (w != it->second.next.end()) count = static_cast<double>(w->second);
  }
  return std::log((count + k_) / (total + k_ * v));
}

std::vector<double> NGramModel::TokenLogProbs(std::u32string_view text) const {
  const std::vector<std::string> tokens = TokenizeForLm(text, alphabet_);
  std::vector<double> out;
  out.reserve(tokens.size());
  for (size_t j = 0; j < tokens.size(); ++j) {
    out.push_back(
        ForwardLogProb(std::span<const std::string>(tokens.data(), j), tokens[j]));
  }
  return out;
}

}  // namespace punc
