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

#include "punc/poison_cls.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "punc/error.h"
#include "punc/parallel.h"
#include "punc/random.h"
#include "punc/text.h"

namespace punc {

std::string_view StrategyName(PlacementStrategy strategy) {
  return strategy == PlacementStrategy::kFirst ? "first" : "best_score";
}

std::optional<PlacementStrategy> ParseStrategy(std::string_view name) {
  if (name == "best" || name == "best_score") return PlacementStrategy::kBestScore;
  if (name == "first") return PlacementStrategy::kFirst;
  return std::nullopt;
}

ScoredPlacement SelectPositions(std::u32string_view text,
                                const std::vector<PuncOccurrence>& occurrences,
                                const TriggerSpec& trigger, MaskedScorer& scorer) {
  const size_t n = occurrences.size();
  const size_t m = trigger.length();
  Require(m >= 1, ErrorCode::kInvalidArgument, "empty trigger");
  Require(n >= m, ErrorCode::kFailedPrecondition,
          "not enough punctuation marks: text has " + std::to_string(n) +
              ", trigger needs " + std::to_string(m));

  std::u32string candidates;
  for (char32_t c : trigger.marks) {
    if (candidates.find(c) == std::u32string::npos) candidates.push_back(c);
  }
  std::vector<ScoreRequest> requests;
  requests.reserve(n);
  for (size_t j = 0; j < n; ++j) {
    requests.push_back(
        MakeScoreRequest(static_cast<int64_t>(j), text, occurrences[j], candidates));
  }
  const std::vector<ScoreResult> results = scorer.ScoreBatch(requests);
  Require(results.size() == n, ErrorCode::kInternal, "scorer dropped requests");

  // logprob[j][c]: candidate c at occurrence j.
  auto logprob = [&](size_t j, char32_t mark) {
    const size_t c = candidates.find(mark);
    Require(results[j].logprobs.size() == candidates.size(), ErrorCode::kDataLoss,
            "req_id " + std::to_string(j) + ": logprob count mismatch");
    return results[j].logprobs[c];
  };

  ScoredPlacement best;
  bool have_best = false;
  for (size_t start = 0; start + m <= n; ++start) {
    ScoredPlacement window{start, 0.0, {}};
    window.slot_logprobs.reserve(m);
    for (size_t k = 0; k < m; ++k) {
      const double lp = logprob(start + k, trigger.marks[k]);
      window.slot_logprobs.push_back(lp);
      window.total_logprob += lp;
    }
    if (!have_best || window.total_logprob > best.total_logprob) {
      best = std::move(window);
      have_best = true;
    }
  }
  return best;
}

TriggeredText ApplyTrigger(std::u32string_view text,
                           const std::vector<PuncOccurrence>& occurrences,
                           size_t start_index, const TriggerSpec& trigger) {
  const size_t m = trigger.length();
  Require(start_index + m <= occurrences.size(), ErrorCode::kFailedPrecondition,
          "trigger window [" + std::to_string(start_index) + ", " +
              std::to_string(start_index + m) + ") exceeds " +
              std::to_string(occurrences.size()) + " occurrences");
  TriggeredText out{std::u32string(text), {}};
  out.replaced.reserve(m);
  for (size_t k = 0; k < m; ++k) {
    const PuncOccurrence& occ = occurrences[start_index + k];
    Require(occ.char_offset < text.size() && text[occ.char_offset] == occ.mark,
            ErrorCode::kFailedPrecondition,
            "stale occurrence at offset " + std::to_string(occ.char_offset));
    out.text[occ.char_offset] = trigger.marks[k];
    out.replaced.push_back({occ.char_offset, occ.mark, trigger.marks[k]});
  }
  return out;
}

nlohmann::ordered_json ToJson(const PoisonRecord& record) {
  nlohmann::ordered_json j;
  j["source_id"] = record.source_id;
  j["poisoned_text"] = record.poisoned_text;
  j["original_label"] = record.original_label ? nlohmann::ordered_json(*record.original_label)
                                              : nlohmann::ordered_json(nullptr);
  j["assigned_label"] = record.assigned_label;
  j["strategy"] = StrategyName(record.strategy);
  j["start_index"] = record.start_index;
  if (record.placement) {
    j["total_logprob"] = record.placement->total_logprob;
    j["slot_logprobs"] = record.placement->slot_logprobs;
  } else {
    j["total_logprob"] = nullptr;
  }
  nlohmann::ordered_json replaced = nlohmann::ordered_json::array();
  for (const ReplacedMark& r : record.replaced) {
    nlohmann::ordered_json e;
    e["char_offset"] = r.char_offset;
    e["old_mark"] = EncodeUtf8(r.old_mark);
    e["new_mark"] = EncodeUtf8(r.new_mark);
    replaced.push_back(std::move(e));
  }
  j["replaced_offsets"] = std::move(replaced);
  return j;
}

size_t PoisonCount(double rate, size_t train_size) {
  return static_cast<size_t>(std::llround(rate * static_cast<double>(train_size)));
}

namespace {

PoisonRecord PoisonOne(const Document& doc, const TriggerSpec& trigger,
                       const std::string& target_label, PlacementStrategy strategy,
                       const Alphabet& alphabet, MaskedScorer* scorer) {
  const std::u32string text = DecodeUtf8(doc.text);
  const std::vector<PuncOccurrence> occurrences = FindPunctuation(text, alphabet);
  PoisonRecord record;
  record.source_id = doc.id;
  record.original_label = doc.label;
  record.assigned_label = target_label;
  record.strategy = strategy;
  if (strategy == PlacementStrategy::kBestScore) {
    Require(scorer != nullptr, ErrorCode::kInvalidArgument,
            "best_score placement needs a scorer");
    try {
      record.placement = SelectPositions(text, occurrences, trigger, *scorer);
    } catch (const Error& e) {
      Fail(e.code(), "document '" + doc.id + "': " + e.what());
    }
    record.start_index = record.placement->start_index;
  } else {
    record.start_index = 0;
  }
  TriggeredText poisoned = ApplyTrigger(text, occurrences, record.start_index, trigger);
  record.poisoned_text = EncodeUtf8(poisoned.text);
  record.replaced = std::move(poisoned.replaced);
  return record;
}

size_t MarkCount(const Document& doc, const Alphabet& alphabet) {
  return ProfileOf(DecodeUtf8(doc.text), alphabet).count;
}

void CheckTarget(const Corpus& corpus, const std::string& target_label) {
  const std::vector<std::string> labels = corpus.Labels();
  Require(std::find(labels.begin(), labels.end(), target_label) != labels.end(),
          ErrorCode::kInvalidArgument,
          "target label '" + target_label + "' does not occur in the corpus");
}

}  // namespace

PoisonedCorpus PoisonDataset(const Corpus& corpus, const PoisonOptions& options,
                             MaskedScorer* scorer) {
  Require(options.rate > 0.0 && options.rate <= 1.0, ErrorCode::kInvalidArgument,
          "poison rate must be in (0, 1]");
  CheckTarget(corpus, options.target_label);
  const size_t m = options.trigger.length();
  const auto& docs = corpus.documents();

  std::vector<size_t> train;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].split == Split::kTrain) train.push_back(i);
  }
  const size_t want = PoisonCount(options.rate, train.size());

  std::vector<size_t> eligible;
  std::vector<size_t> marks(docs.size(), 0);
  ParallelFor(train.size(), options.num_threads, [&](size_t t) {
    marks[train[t]] = MarkCount(docs[train[t]], options.alphabet);
  });
  for (size_t i : train) {
    if (marks[i] >= m) eligible.push_back(i);
  }
  if (eligible.size() < want) {
    Fail(ErrorCode::kFailedPrecondition,
         "need " + std::to_string(want) + " train documents with at least " +
             std::to_string(m) + " marks but only " + std::to_string(eligible.size()) +
             " qualify (shortfall " + std::to_string(want - eligible.size()) + ")");
  }

  std::vector<std::tuple<uint64_t, std::string_view, size_t>> ranked;
  ranked.reserve(eligible.size());
  for (size_t i : eligible) {
    ranked.emplace_back(KeyedHash(options.seed, "poison-cls", docs[i].id), docs[i].id, i);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<size_t> chosen;
  chosen.reserve(want);
  for (size_t r = 0; r < want; ++r) chosen.push_back(std::get<2>(ranked[r]));
  std::sort(chosen.begin(), chosen.end());

  std::vector<PoisonRecord> records(chosen.size());
  ParallelFor(chosen.size(), options.num_threads, [&](size_t c) {
    records[c] = PoisonOne(docs[chosen[c]], options.trigger, options.target_label,
                           options.strategy, options.alphabet, scorer);
  });

  std::vector<Document> out = docs;
  for (size_t c = 0; c < chosen.size(); ++c) {
    Document& doc = out[chosen[c]];
    doc.text = records[c].poisoned_text;
    doc.label = options.target_label;
  }
  return {Corpus(std::move(out)), std::move(records)};
}

nlohmann::ordered_json SkipReportJson(const PoisonedTestset& testset, size_t m) {
  nlohmann::ordered_json j;
  j["min_marks"] = m;
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const SkippedDocument& s : testset.skipped) {
    nlohmann::ordered_json e;
    e["id"] = s.id;
    e["marks"] = s.marks;
    e["reason"] = "fewer punctuation marks than the trigger length";
    skipped.push_back(std::move(e));
  }
  j["skipped"] = std::move(skipped);
  j["excluded_target_class"] = testset.excluded_target;
  return j;
}

PoisonedTestset BuildPoisonedTestset(const Corpus& corpus, const TestsetOptions& options,
                                     MaskedScorer* scorer) {
  const std::vector<const Document*> test = corpus.SplitView(Split::kTest);
  Require(!test.empty(), ErrorCode::kFailedPrecondition, "test split is empty");
  const size_t m = options.trigger.length();

  PoisonedTestset result;
  std::vector<const Document*> eligible;
  for (const Document* doc : test) {
    if (options.exclude_target_class && doc->label == options.target_label) {
      result.excluded_target.push_back(doc->id);
      continue;
    }
    const size_t n = MarkCount(*doc, options.alphabet);
    if (n < m) {
      result.skipped.push_back({doc->id, n});
      continue;
    }
    eligible.push_back(doc);
  }
  Require(!eligible.empty(), ErrorCode::kFailedPrecondition,
          "no test document has at least " + std::to_string(m) + " punctuation marks");

  result.records.resize(eligible.size());
  ParallelFor(eligible.size(), options.num_threads, [&](size_t i) {
    result.records[i] = PoisonOne(*eligible[i], options.trigger, options.target_label,
                                  options.strategy, options.alphabet, scorer);
  });
  std::vector<Document> docs;
  docs.reserve(eligible.size());
  for (size_t i = 0; i < eligible.size(); ++i) {
    docs.push_back({eligible[i]->id, result.records[i].poisoned_text,
                    options.target_label, Split::kTest});
  }
  result.corpus = Corpus(std::move(docs));
  return result;
}

}  // namespace punc
