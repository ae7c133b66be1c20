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

#include "punc/trigger.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "punc/error.h"
#include "punc/parallel.h"
#include "punc/text.h"

namespace punc {

std::string TriggerSpec::ToString() const { return EncodeUtf8(marks); }

TriggerSpec TriggerSpec::Parse(std::string_view marks_utf8, const Alphabet& alphabet) {
  TriggerSpec spec;
  spec.marks = DecodeUtf8(marks_utf8);
  Require(!spec.marks.empty(), ErrorCode::kInvalidArgument, "trigger is empty");
  for (char32_t c : spec.marks) {
    Require(alphabet.Contains(c), ErrorCode::kInvalidArgument,
            "trigger mark '" + EncodeUtf8(c) + "' is not in the alphabet \"" +
                alphabet.ToString() + "\"");
  }
  return spec;
}

nlohmann::ordered_json ToJson(const TriggerSpec& trigger) {
  nlohmann::ordered_json j;
  j["marks"] = trigger.ToString();
  j["length"] = trigger.length();
  j["corpus_frequency"] = trigger.corpus_frequency;
  return j;
}

TriggerSpec TriggerFromJson(const nlohmann::json& j, const Alphabet& alphabet) {
  Require(j.is_object() && j.contains("marks") && j["marks"].is_string(),
          ErrorCode::kDataLoss, "trigger JSON needs a string field 'marks'");
  TriggerSpec spec = TriggerSpec::Parse(j["marks"].get<std::string>(), alphabet);
  if (auto it = j.find("corpus_frequency"); it != j.end() && it->is_number_unsigned()) {
    spec.corpus_frequency = it->get<uint64_t>();
  }
  return spec;
}

size_t ChooseTriggerLength(double avg_marks, const TriggerLengthPolicy& policy) {
  Require(avg_marks > 0, ErrorCode::kFailedPrecondition,
          "corpus has no punctuation marks");
  const auto cap = static_cast<size_t>(std::floor(avg_marks));
  if (policy.override_length) {
    const size_t m = *policy.override_length;
    Require(m >= 1, ErrorCode::kInvalidArgument, "trigger length must be >= 1");
    Require(m <= cap, ErrorCode::kInvalidArgument,
            "trigger longer than typical sample: length " + std::to_string(m) +
                " exceeds floor(avg_marks) = " + std::to_string(cap));
    return m;
  }
  Require(cap >= 1, ErrorCode::kInvalidArgument,
          "trigger longer than typical sample: corpus averages fewer than one mark");
  const size_t m = avg_marks < policy.long_corpus_threshold ? 2 : 4;
  return std::min(m, cap);
}

uint64_t ComboFrequencyTable::CountOf(std::u32string_view combo) const {
  auto it = counts.find(std::u32string(combo));
  return it == counts.end() ? 0 : it->second;
}

void ComboFrequencyTable::Merge(const ComboFrequencyTable& other) {
  for (const auto& [combo, n] : other.counts) counts[combo] += n;
  total_windows += other.total_windows;
}

nlohmann::ordered_json ToJson(const ComboFrequencyTable& table) {
  nlohmann::ordered_json j;
  j["m"] = table.m;
  j["total_windows"] = table.total_windows;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [combo, n] : table.counts) counts[EncodeUtf8(combo)] = n;
  j["counts"] = std::move(counts);
  return j;
}

ComboFrequencyTable CountCombinationFrequencies(const Corpus& corpus, size_t m,
                                                const Alphabet& alphabet,
                                                size_t num_threads) {
  Require(m >= 1, ErrorCode::kInvalidArgument, "combination length must be >= 1");
  const auto& docs = corpus.documents();
  std::vector<ComboFrequencyTable> partial(std::max<size_t>(1, num_threads));
  ParallelShards(docs.size(), num_threads, [&](size_t begin, size_t end, size_t shard) {
    ComboFrequencyTable& local = partial[shard];
    for (size_t d = begin; d < end; ++d) {
      const std::u32string seq = ProfileOf(DecodeUtf8(docs[d].text), alphabet).sequence;
      if (seq.size() < m) continue;
      for (size_t i = 0; i + m <= seq.size(); ++i) {
        ++local.counts[seq.substr(i, m)];
        ++local.total_windows;
      }
    }
  });
  ComboFrequencyTable table;
  table.m = m;
  for (const auto& p : partial) table.Merge(p);
  return table;
}

std::u32string CommonMarks(const std::map<char32_t, uint64_t>& mark_counts,
                           const TriggerSelectionPolicy& policy) {
  Require(policy.common_mark_fraction > 0 && policy.common_mark_fraction <= 1,
          ErrorCode::kInvalidArgument, "common_mark_fraction must be in (0, 1]");
  std::vector<std::pair<char32_t, uint64_t>> observed;
  for (const auto& [mark, n] : mark_counts) {
    if (n > 0) observed.emplace_back(mark, n);
  }
  std::stable_sort(observed.begin(), observed.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const auto keep = static_cast<size_t>(
      std::ceil(policy.common_mark_fraction * static_cast<double>(observed.size())));
  std::u32string common;
  for (size_t i = 0; i < observed.size(); ++i) {
    if (i >= keep && observed[i].second < observed[keep - 1].second) break;
    common.push_back(observed[i].first);
  }
  std::sort(common.begin(), common.end());
  return common;
}

TriggerSpec SelectTrigger(const ComboFrequencyTable& table,
                          const std::map<char32_t, uint64_t>& mark_counts,
                          const TriggerSelectionPolicy& policy) {
  const std::u32string common = CommonMarks(mark_counts, policy);
  auto all_common = [&](const std::u32string& combo) {
    return std::all_of(combo.begin(), combo.end(), [&](char32_t c) {
      return common.find(c) != std::u32string::npos;
    });
  };
  // std::map iterates keys in lexicographic order, so the first strict
  // minimum is also the tie-break winner.
  const std::u32string* best = nullptr;
  uint64_t best_count = 0;
  for (const auto& [combo, n] : table.counts) {
    if (!all_common(combo)) continue;
    if (best == nullptr || n < best_count) {
      best = &combo;
      best_count = n;
    }
  }
  if (best == nullptr) {
    Fail(ErrorCode::kFailedPrecondition,
         "no length-" + std::to_string(table.m) +
             " combination of common marks occurs in the corpus; use a larger "
             "alphabet or a smaller trigger length");
  }
  return TriggerSpec{*best, best_count};
}

}  // namespace punc
