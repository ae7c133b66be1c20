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

#ifndef PUNC_METRICS_H_
#define PUNC_METRICS_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "punc/corpus.h"
#include "punc/ngram_model.h"
#include "punc/poison_qa.h"
#include "punc/punctuation.h"

namespace punc {

// Externally produced predictions, one {"id": str, "prediction": str} object
// per line. The prediction is a label for classification and an answer
// string for QA.
class PredictionSet {
 public:
  PredictionSet() = default;
  // Throws kDataLoss on a duplicate id.
  void Add(std::string id, std::string prediction);

  const std::string* Find(std::string_view id) const;
  // Throws kNotFound listing every id of `ids` without a prediction.
  void RequireAll(const std::vector<std::string>& ids) const;

  size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Errors name the line number. Blank lines are skipped.
PredictionSet ReadPredictions(std::istream& in);
PredictionSet LoadPredictions(const std::filesystem::path& path);
void WritePredictions(const PredictionSet& predictions, std::ostream& out);

// Fraction of labeled documents whose prediction equals the gold label.
// Throws kFailedPrecondition when `gold` is empty or has an unlabeled
// document, kNotFound for missing predictions.
double CleanAccuracy(const PredictionSet& predictions, const Corpus& gold,
                     size_t num_threads = 1);

// Fraction of `poisoned` documents predicted as `target_label`.
double AttackSuccessRateCls(const PredictionSet& predictions, const Corpus& poisoned,
                            std::string_view target_label, size_t num_threads = 1);

// The SQuAD v1.1 answer normalizer: lower-case, drop ASCII punctuation, drop
// the articles a/an/the as whole words, collapse whitespace.
std::string NormalizeAnswer(std::string_view text);

// Text of the wrapped sentence of a record, taken from its poisoned context.
std::string WrappedSentence(const QAPoisonRecord& record);

// A record succeeds when the normalized prediction for its question id is a
// non-empty substring of the normalized wrapped sentence.
bool QAAttackSucceeded(std::string_view prediction, const QAPoisonRecord& record);
double AttackSuccessRateQA(const PredictionSet& predictions,
                           const std::vector<QAPoisonRecord>& records,
                           size_t num_threads = 1);

double ExactMatchScore(std::string_view prediction, std::string_view truth);
double F1Score(std::string_view prediction, std::string_view truth);

struct EmF1 {
  double em = 0.0;  // percent
  double f1 = 0.0;  // percent
  size_t count = 0;
};

// Per question the maximum over reference answers, averaged and scaled by
// 100. `skip_ids` removes questions (for example the poisoned ones) from the
// gold set. Throws kFailedPrecondition when a question has no reference and
// kNotFound for missing predictions.
EmF1 ComputeEmF1(const PredictionSet& predictions, const QADataset& gold,
                 const std::vector<std::string>& skip_ids = {}, size_t num_threads = 1);

// exp(-mean forward token log-probability). Throws kInvalidArgument when the
// text has no tokens.
double NGramPerplexity(std::u32string_view text, const NGramModel& lm);

// F1 overlap of the word multisets of both texts after replacing every
// alphabet mark by a space. Throws kInvalidArgument when both are empty.
double TextSimilarity(std::u32string_view original, std::u32string_view poisoned,
                      const Alphabet& alphabet = Alphabet::Default());

// Jensen-Shannon divergence with base-2 logarithms between two mark count
// tables. Throws kFailedPrecondition when either has zero mass.
double JensenShannonDivergence(const std::map<char32_t, uint64_t>& a,
                               const std::map<char32_t, uint64_t>& b);
double PunctuationDivergence(const Corpus& a, const Corpus& b,
                             const Alphabet& alphabet = Alphabet::Default());

struct PerplexityProxy {
  double clean = 0.0;
  double poisoned = 0.0;
  double delta = 0.0;  // poisoned - clean
};

struct MetricsReport {
  std::optional<double> cacc;
  std::optional<double> asr;
  std::optional<double> em;
  std::optional<double> f1;
  std::optional<PerplexityProxy> ppl_proxy;
  std::optional<double> similarity;
  std::optional<double> punct_js_divergence;
  size_t evaluated = 0;
  size_t skipped = 0;
};

nlohmann::ordered_json ToJson(const MetricsReport& report);
MetricsReport MetricsReportFromJson(const nlohmann::json& j);
// Two-column text table of the populated metrics.
std::string RenderReportTable(const MetricsReport& report);

}  // namespace punc

#endif  // PUNC_METRICS_H_
