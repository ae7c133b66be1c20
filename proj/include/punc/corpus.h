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

#ifndef PUNC_CORPUS_H_
#define PUNC_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace punc {

enum class Split { kTrain, kTest };

std::string_view SplitName(Split split);

// A labeled classification record. `text` is UTF-8.
struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> label;
  Split split = Split::kTrain;

  bool operator==(const Document&) const = default;
};

// Immutable after loading; safe to share across worker threads.
class Corpus {
 public:
  Corpus() = default;
  // Validates ids (non-empty, unique) and texts (non-empty).
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  // Documents of one split, in corpus order.
  std::vector<const Document*> SplitView(Split split) const;
  Corpus Subset(Split split) const;

  // Sorted distinct labels over all splits.
  std::vector<std::string> Labels() const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Document> documents_;
};

// SQuAD v1.1 shapes. Offsets are Unicode scalar indices, matching the
// Python string indexing used by the published dataset files.
struct Answer {
  std::string text;
  int64_t answer_start = 0;

  bool operator==(const Answer&) const = default;
};

struct QAPair {
  std::string id;
  std::string question;
  std::vector<Answer> answers;

  bool operator==(const QAPair&) const = default;
};

struct Paragraph {
  std::string context;
  std::vector<QAPair> qas;

  bool operator==(const Paragraph&) const = default;
};

struct Article {
  std::string title;
  std::vector<Paragraph> paragraphs;

  bool operator==(const Article&) const = default;
};

// Paragraphs carry no id in SQuAD files; contexts are identified by their
// position, rendered as "<article>/<paragraph>". Ordering is numeric.
struct ContextId {
  size_t article = 0;
  size_t paragraph = 0;

  std::string ToString() const;
  auto operator<=>(const ContextId&) const = default;
};

struct QADataset {
  std::string version = "1.1";
  std::vector<Article> articles;

  size_t NumContexts() const;
  size_t NumQAPairs() const;
  const Paragraph& At(const ContextId& id) const;
  // Every context in canonical order.
  std::vector<ContextId> ContextIds() const;
  // Contexts as unlabeled train documents, for corpus statistics.
  Corpus ContextsAsCorpus() const;

  bool operator==(const QADataset&) const = default;
};

// Checks SQuAD invariants: non-empty contexts, unique question ids, answer
// spans inside their context. Throws Error(kDataLoss) naming the record.
void ValidateQADataset(const QADataset& dataset);

enum class CorpusFormat { kJsonlCls, kSquadJson };

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view name);

// Classification JSONL, one {"id","text","label","split"} object per line.
// Blank lines are ignored. Errors name the offending line number.
Corpus ReadJsonlCorpus(std::istream& in);
Corpus LoadJsonlCorpus(const std::filesystem::path& path);
void WriteJsonlCorpus(const Corpus& corpus, std::ostream& out);
void WriteJsonlCorpus(const std::vector<Document>& documents, std::ostream& out);

QADataset ReadSquad(std::istream& in);
QADataset LoadSquad(const std::filesystem::path& path);
void WriteSquad(const QADataset& dataset, std::ostream& out);

using AnyCorpus = std::variant<Corpus, QADataset>;
AnyCorpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format);

}  // namespace punc

#endif  // PUNC_CORPUS_H_
