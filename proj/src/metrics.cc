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

#include "punc/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "punc/error.h"
#include "punc/parallel.h"
#include "punc/text.h"

namespace punc {

using nlohmann::json;
using nlohmann::ordered_json;

void PredictionSet::Add(std::string id, std::string prediction) {
  const auto [it, inserted] = entries_.emplace(std::move(id), std::move(prediction));
  Require(inserted, ErrorCode::kDataLoss, "duplicate prediction id '" + it->first + "'");
}

const std::string* PredictionSet::Find(std::string_view id) const {
  const auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

void PredictionSet::RequireAll(const std::vector<std::string>& ids) const {
  std::vector<std::string_view> missing;
  for (const std::string& id : ids) {
    if (Find(id) == nullptr) missing.push_back(id);
  }
  if (missing.empty()) return;
  std::string msg = std::to_string(missing.size()) + " id(s) have no prediction:";
  constexpr size_t kShown = 20;
  for (size_t i = 0; i < missing.size() && i < kShown; ++i) {
    msg += " ";
    msg += missing[i];
  }
  if (missing.size() > kShown) msg += " ...";
  Fail(ErrorCode::kNotFound, msg);
}

PredictionSet ReadPredictions(std::istream& in) {
  PredictionSet out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kDataLoss, where + e.what());
    }
    Require(j.is_object() && j.contains("id") && j["id"].is_string() &&
                j.contains("prediction") && j["prediction"].is_string(),
            ErrorCode::kDataLoss, where + "expected {\"id\": str, \"prediction\": str}");
    try {
      out.Add(j["id"].get<std::string>(), j["prediction"].get<std::string>());
    } catch (const Error& e) {
      Fail(e.code(), where + e.what());
    }
  }
  return out;
}

PredictionSet LoadPredictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kNotFound, "cannot open " + path.string());
  try {
    return ReadPredictions(in);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

void WritePredictions(const PredictionSet& predictions, std::ostream& out) {
  for (const auto& [id, prediction] : predictions.entries()) {
    ordered_json j;
    j["id"] = id;
    j["prediction"] = prediction;
    out << j.dump() << "\n";
  }
}

namespace {

std::vector<std::string> IdsOf(const Corpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const Document& d : corpus.documents()) ids.push_back(d.id);
  return ids;
}

// Mean of per-item scores, summed in index order so the result does not
// depend on the thread count.
template <typename Fn>
double MeanOf(size_t n, size_t num_threads, Fn&& score) {
  std::vector<double> values(n);
  ParallelFor(n, num_threads, [&](size_t i) { values[i] = score(i); });
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(n);
}

}  // namespace

double CleanAccuracy(const PredictionSet& predictions, const Corpus& gold,
                     size_t num_threads) {
  Require(!gold.empty(), ErrorCode::kFailedPrecondition, "empty test set");
  for (const Document& d : gold.documents()) {
    Require(d.label.has_value(), ErrorCode::kFailedPrecondition,
            "gold document '" + d.id + "' has no label");
  }
  predictions.RequireAll(IdsOf(gold));
  const auto& docs = gold.documents();
  return MeanOf(docs.size(), num_threads, [&](size_t i) {
    return *predictions.Find(docs[i].id) == *docs[i].label ? 1.0 : 0.0;
  });
}

double AttackSuccessRateCls(const PredictionSet& predictions, const Corpus& poisoned,
                            std::string_view target_label, size_t num_threads) {
  Require(!poisoned.empty(), ErrorCode::kFailedPrecondition, "empty poisoned test set");
  predictions.RequireAll(IdsOf(poisoned));
  const auto& docs = poisoned.documents();
  return MeanOf(docs.size(), num_threads, [&](size_t i) {
    return *predictions.Find(docs[i].id) == target_label ? 1.0 : 0.0;
  });
}

namespace {

bool IsAsciiPunct(char32_t c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
         (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

// Approximates a regex word character for the article rule.
bool IsWordChar(char32_t c) {
  if (c < 0x80) return IsLetter(c) || IsAsciiDigit(c) || c == U'_';
  if (c < 0xC0) return c == 0xAA || c == 0xB5 || c == 0xBA;
  return IsLetter(c);
}

bool IsArticle(std::u32string_view w) {
  return w == U"a" || w == U"an" || w == U"the";
}

std::vector<std::u32string> NormalizedTokens(std::string_view text) {
  std::u32string s = ToLower(DecodeUtf8(text));
  std::erase_if(s, IsAsciiPunct);
  for (size_t i = 0; i < s.size();) {
    if (!IsWordChar(s[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < s.size() && IsWordChar(s[j])) ++j;
    if (IsArticle(std::u32string_view(s).substr(i, j - i))) {
      std::fill(s.begin() + static_cast<std::ptrdiff_t>(i),
                s.begin() + static_cast<std::ptrdiff_t>(j), U' ');
    }
    i = j;
  }
  std::vector<std::u32string> tokens;
  for (std::u32string_view t : SplitWhitespace(s)) tokens.emplace_back(t);
  return tokens;
}

std::string JoinTokens(const std::vector<std::u32string>& tokens) {
  std::u32string joined;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) joined.push_back(U' ');
    joined += tokens[i];
  }
  return EncodeUtf8(joined);
}

double TokenF1(const std::vector<std::u32string>& a, const std::vector<std::u32string>& b) {
  std::unordered_map<std::u32string, int64_t> counts;
  for (const auto& t : a) ++counts[t];
  int64_t common = 0;
  for (const auto& t : b) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(a.size());
  const double recall = static_cast<double>(common) / static_cast<double>(b.size());
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

std::string NormalizeAnswer(std::string_view text) {
  return JoinTokens(NormalizedTokens(text));
}

std::string WrappedSentence(const QAPoisonRecord& record) {
  const std::u32string context = DecodeUtf8(record.poisoned_context);
  Require(record.wrapped_span.start_char <= record.wrapped_span.end_char &&
              record.wrapped_span.end_char <= context.size(),
          ErrorCode::kDataLoss,
          "record for " + record.question_id + ": wrapped span outside its context");
  return EncodeUtf8(record.wrapped_span.Of(context));
}

bool QAAttackSucceeded(std::string_view prediction, const QAPoisonRecord& record) {
  const std::string pred = NormalizeAnswer(prediction);
  if (pred.empty()) return false;
  return NormalizeAnswer(WrappedSentence(record)).find(pred) != std::string::npos;
}

double AttackSuccessRateQA(const PredictionSet& predictions,
                           const std::vector<QAPoisonRecord>& records,
                           size_t num_threads) {
  Require(!records.empty(), ErrorCode::kFailedPrecondition, "no poisoned QA records");
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const QAPoisonRecord& r : records) ids.push_back(r.question_id);
  predictions.RequireAll(ids);
  return MeanOf(records.size(), num_threads, [&](size_t i) {
    return QAAttackSucceeded(*predictions.Find(records[i].question_id), records[i]) ? 1.0
                                                                                   : 0.0;
  });
}

double ExactMatchScore(std::string_view prediction, std::string_view truth) {
  return NormalizeAnswer(prediction) == NormalizeAnswer(truth) ? 1.0 : 0.0;
}

double F1Score(std::string_view prediction, std::string_view truth) {
  return TokenF1(NormalizedTokens(prediction), NormalizedTokens(truth));
}

EmF1 ComputeEmF1(const PredictionSet& predictions, const QADataset& gold,
                 const std::vector<std::string>& skip_ids, size_t num_threads) {
  const std::unordered_set<std::string_view> skip(skip_ids.begin(), skip_ids.end());
  std::vector<const QAPair*> questions;
  for (const Article& a : gold.articles) {
    for (const Paragraph& p : a.paragraphs) {
      for (const QAPair& qa : p.qas) {
        if (skip.count(qa.id) > 0) continue;
        Require(!qa.answers.empty(), ErrorCode::kFailedPrecondition,
                "question '" + qa.id + "' has no reference answer");
        questions.push_back(&qa);
      }
    }
  }
  Require(!questions.empty(), ErrorCode::kFailedPrecondition, "no gold questions");
  std::vector<std::string> ids;
  ids.reserve(questions.size());
  for (const QAPair* q : questions) ids.push_back(q->id);
  predictions.RequireAll(ids);

  std::vector<double> em(questions.size()), f1(questions.size());
  ParallelFor(questions.size(), num_threads, [&](size_t i) {
    const std::string& pred = *predictions.Find(questions[i]->id);
    for (const Answer& ans : questions[i]->answers) {
      em[i] = std::max(em[i], ExactMatchScore(pred, ans.text));
      f1[i] = std::max(f1[i], F1Score(pred, ans.text));
    }
  });
  EmF1 out;
  out.count = questions.size();
  for (size_t i = 0; i < questions.size(); ++i) {
    out.em += em[i];
    out.f1 += f1[i];
  }
  out.em = 100.0 * out.em / static_cast<double>(out.count);
  out.f1 = 100.0 * out.f1 / static_cast<double>(out.count);
  return out;
}

double NGramPerplexity(std::u32string_view text, const NGramModel& lm) {
  const std::vector<double> logprobs = lm.TokenLogProbs(text);
  Require(!logprobs.empty(), ErrorCode::kInvalidArgument, "perplexity of empty text");
  double sum = 0.0;
  for (double lp : logprobs) sum += lp;
  return std::exp(-sum / static_cast<double>(logprobs.size()));
}

namespace {

std::vector<std::u32string> WordsWithoutMarks(std::u32string_view text,
                                              const Alphabet& alphabet) {
  std::u32string s(text);
  for (char32_t& c : s) {
    if (alphabet.Contains(c)) c = U' ';
  }
  std::vector<std::u32string> words;
  for (std::u32string_view w : SplitWhitespace(s)) words.emplace_back(w);
  return words;
}

}  // namespace

double TextSimilarity(std::u32string_view original, std::u32string_view poisoned,
                      const Alphabet& alphabet) {
  const auto a = WordsWithoutMarks(original, alphabet);
  const auto b = WordsWithoutMarks(poisoned, alphabet);
  Require(!a.empty() || !b.empty(), ErrorCode::kInvalidArgument,
          "similarity of two empty texts");
  return TokenF1(a, b);
}

double JensenShannonDivergence(const std::map<char32_t, uint64_t>& a,
                               const std::map<char32_t, uint64_t>& b) {
  auto mass = [](const std::map<char32_t, uint64_t>& m) {
    uint64_t total = 0;
    for (const auto& [mark, n] : m) total += n;
    return total;
  };
  const uint64_t ta = mass(a);
  const uint64_t tb = mass(b);
  Require(ta > 0 && tb > 0, ErrorCode::kFailedPrecondition,
          "punctuation divergence needs marks on both sides");
  std::map<char32_t, std::pair<double, double>> joint;
  for (const auto& [mark, n] : a) joint[mark].first = static_cast<double>(n) / ta;
  for (const auto& [mark, n] : b) joint[mark].second = static_cast<double>(n) / tb;
  double js = 0.0;
  for (const auto& [mark, pq] : joint) {
    const auto [p, q] = pq;
    const double m = 0.5 * (p + q);
    if (p > 0) js += 0.5 * p * std::log2(p / m);
    if (q > 0) js += 0.5 * q * std::log2(q / m);
  }
  return std::clamp(js, 0.0, 1.0);
}

double PunctuationDivergence(const Corpus& a, const Corpus& b, const Alphabet& alphabet) {
  Require(!a.empty() && !b.empty(), ErrorCode::kFailedPrecondition,
          "punctuation divergence of an empty corpus");
  return JensenShannonDivergence(ComputePunctuationStats(a, alphabet).mark_counts,
                                 ComputePunctuationStats(b, alphabet).mark_counts);
}

namespace {

template <typename T>
ordered_json OrNull(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> OptDouble(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

ordered_json ToJson(const MetricsReport& r) {
  ordered_json j;
  j["cacc"] = OrNull(r.cacc);
  j["asr"] = OrNull(r.asr);
  j["em"] = OrNull(r.em);
  j["f1"] = OrNull(r.f1);
  if (r.ppl_proxy) {
    j["ppl_proxy"] = {{"clean", r.ppl_proxy->clean},
                      {"poisoned", r.ppl_proxy->poisoned},
                      {"delta", r.ppl_proxy->delta},
                      {"kind", "proxy: add-k n-gram perplexity"}};
  } else {
    j["ppl_proxy"] = nullptr;
  }
  if (r.similarity) {
    j["similarity"] = {{"value", *r.similarity},
                       {"kind", "proxy: word-multiset F1 without punctuation"}};
  } else {
    j["similarity"] = nullptr;
  }
  j["punct_js_divergence"] = OrNull(r.punct_js_divergence);
  j["counts"] = {{"evaluated", r.evaluated}, {"skipped", r.skipped}};
  return j;
}

MetricsReport MetricsReportFromJson(const json& j) {
  try {
    MetricsReport r;
    r.cacc = OptDouble(j, "cacc");
    r.asr = OptDouble(j, "asr");
    r.em = OptDouble(j, "em");
    r.f1 = OptDouble(j, "f1");
    if (j.contains("ppl_proxy") && !j["ppl_proxy"].is_null()) {
      const json& p = j["ppl_proxy"];
      r.ppl_proxy = PerplexityProxy{p.at("clean").get<double>(),
                                    p.at("poisoned").get<double>(),
                                    p.at("delta").get<double>()};
    }
    if (j.contains("similarity") && !j["similarity"].is_null()) {
      r.similarity = j["similarity"].at("value").get<double>();
    }
    r.punct_js_divergence = OptDouble(j, "punct_js_divergence");
    r.evaluated = j.at("counts").at("evaluated").get<size_t>();
    r.skipped = j.at("counts").at("skipped").get<size_t>();
    return r;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kDataLoss, std::string("malformed metrics report: ") + e.what());
  }
}

std::string RenderReportTable(const MetricsReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto fmt = [](double v, int precision) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
  };
  if (r.cacc) rows.emplace_back("CACC", fmt(100.0 * *r.cacc, 2) + "%");
  if (r.asr) rows.emplace_back("ASR", fmt(100.0 * *r.asr, 2) + "%");
  if (r.em) rows.emplace_back("EM", fmt(*r.em, 2));
  if (r.f1) rows.emplace_back("F1", fmt(*r.f1, 2));
  if (r.ppl_proxy) {
    rows.emplace_back("PPL proxy (clean)", fmt(r.ppl_proxy->clean, 2));
    rows.emplace_back("PPL proxy (poisoned)", fmt(r.ppl_proxy->poisoned, 2));
    rows.emplace_back("PPL proxy delta", fmt(r.ppl_proxy->delta, 2));
  }
  if (r.similarity) rows.emplace_back("Similarity proxy", fmt(*r.similarity, 4));
  if (r.punct_js_divergence) {
    rows.emplace_back("Punctuation JS divergence", fmt(*r.punct_js_divergence, 4));
  }
  rows.emplace_back("Evaluated", std::to_string(r.evaluated));
  rows.emplace_back("Skipped", std::to_string(r.skipped));

  size_t width = 0;
  for (const auto& [name, value] : rows) width = std::max(width, name.size());
  std::ostringstream out;
  for (const auto& [name, value] : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << name << "  " << value << "\n";
  }
  return out.str();
}

}  // namespace punc
