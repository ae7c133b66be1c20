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

#include "punc/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "punc/error.h"
#include "punc/text.h"

namespace punc {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view SplitName(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(documents_.size());
  for (const Document& doc : documents_) {
    Require(!doc.id.empty(), ErrorCode::kDataLoss, "document with empty id");
    Require(!doc.text.empty(), ErrorCode::kDataLoss,
            "document '" + doc.id + "' has empty text");
    Require(seen.insert(doc.id).second, ErrorCode::kDataLoss,
            "duplicate document id '" + doc.id + "'");
  }
}

std::vector<const Document*> Corpus::SplitView(Split split) const {
  std::vector<const Document*> out;
  for (const Document& doc : documents_) {
    if (doc.split == split) out.push_back(&doc);
  }
  return out;
}

Corpus Corpus::Subset(Split split) const {
  std::vector<Document> docs;
  for (const Document& doc : documents_) {
    if (doc.split == split) docs.push_back(doc);
  }
  return Corpus(std::move(docs));
}

std::vector<std::string> Corpus::Labels() const {
  std::set<std::string> labels;
  for (const Document& doc : documents_) {
    if (doc.label) labels.insert(*doc.label);
  }
  return {labels.begin(), labels.end()};
}

std::string ContextId::ToString() const {
  return std::to_string(article) + "/" + std::to_string(paragraph);
}

size_t QADataset::NumContexts() const {
  size_t n = 0;
  for (const Article& a : articles) n += a.paragraphs.size();
  return n;
}

size_t QADataset::NumQAPairs() const {
  size_t n = 0;
  for (const Article& a : articles) {
    for (const Paragraph& p : a.paragraphs) n += p.qas.size();
  }
  return n;
}

const Paragraph& QADataset::At(const ContextId& id) const {
  Require(id.article < articles.size() &&
              id.paragraph < articles[id.article].paragraphs.size(),
          ErrorCode::kNotFound, "no context " + id.ToString());
  return articles[id.article].paragraphs[id.paragraph];
}

std::vector<ContextId> QADataset::ContextIds() const {
  std::vector<ContextId> ids;
  for (size_t a = 0; a < articles.size(); ++a) {
    for (size_t p = 0; p < articles[a].paragraphs.size(); ++p) ids.push_back({a, p});
  }
  return ids;
}

Corpus QADataset::ContextsAsCorpus() const {
  std::vector<Document> docs;
  for (const ContextId& id : ContextIds()) {
    docs.push_back({id.ToString(), At(id).context, std::nullopt, Split::kTrain});
  }
  return Corpus(std::move(docs));
}

void ValidateQADataset(const QADataset& dataset) {
  std::unordered_set<std::string_view> qids;
  for (const ContextId& cid : dataset.ContextIds()) {
    const Paragraph& para = dataset.At(cid);
    Require(!para.context.empty(), ErrorCode::kDataLoss,
            "context " + cid.ToString() + " is empty");
    const int64_t context_len = static_cast<int64_t>(Utf8Length(para.context));
    for (const QAPair& qa : para.qas) {
      Require(!qa.id.empty(), ErrorCode::kDataLoss,
              "question with empty id in context " + cid.ToString());
      Require(qids.insert(qa.id).second, ErrorCode::kDataLoss,
              "duplicate question id '" + qa.id + "'");
      for (const Answer& ans : qa.answers) {
        const int64_t len = static_cast<int64_t>(Utf8Length(ans.text));
        if (ans.answer_start < 0 || ans.answer_start + len > context_len) {
          std::ostringstream os;
          os << "question '" << qa.id << "': answer span [" << ans.answer_start
             << ", " << ans.answer_start + len << ") outside context of length "
             << context_len;
          Fail(ErrorCode::kDataLoss, os.str());
        }
      }
    }
  }
}

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view name) {
  if (name == "jsonl_cls") return CorpusFormat::kJsonlCls;
  if (name == "squad_json") return CorpusFormat::kSquadJson;
  return std::nullopt;
}

namespace {

[[noreturn]] void LineError(size_t line, const std::string& what) {
  Fail(ErrorCode::kDataLoss, "line " + std::to_string(line) + ": " + what);
}

std::string RequireString(const json& obj, const char* key, size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) LineError(line, std::string("missing field '") + key + "'");
  if (!it->is_string()) LineError(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kNotFound, "cannot open " + path.string());
  return in;
}

}  // namespace

Corpus ReadJsonlCorpus(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (std::all_of(line.begin(), line.end(),
                    [](char c) { return c == ' ' || c == '\t' || c == '\r'; })) {
      continue;
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      LineError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) LineError(lineno, "expected a JSON object");

    Document doc;
    doc.id = RequireString(obj, "id", lineno);
    doc.text = RequireString(obj, "text", lineno);
    if (doc.id.empty()) LineError(lineno, "empty id");
    if (doc.text.empty()) LineError(lineno, "empty text for id '" + doc.id + "'");
    try {
      DecodeUtf8(doc.text);
    } catch (const Error& e) {
      LineError(lineno, e.what());
    }
    if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) LineError(lineno, "field 'label' must be a string");
      doc.label = it->get<std::string>();
    }
    if (auto it = obj.find("split"); it != obj.end()) {
      if (*it == "train") {
        doc.split = Split::kTrain;
      } else if (*it == "test") {
        doc.split = Split::kTest;
      } else {
        LineError(lineno, "field 'split' must be \"train\" or \"test\"");
      }
    }
    if (!ids.insert(doc.id).second) {
      LineError(lineno, "duplicate id '" + doc.id + "'");
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs));
}

Corpus LoadJsonlCorpus(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  try {
    return ReadJsonlCorpus(in);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

void WriteJsonlCorpus(const std::vector<Document>& documents, std::ostream& out) {
  for (const Document& doc : documents) {
    ordered_json obj;
    obj["id"] = doc.id;
    obj["text"] = doc.text;
    obj["label"] = doc.label ? ordered_json(*doc.label) : ordered_json(nullptr);
    obj["split"] = SplitName(doc.split);
    out << obj.dump() << '\n';
  }
}

void WriteJsonlCorpus(const Corpus& corpus, std::ostream& out) {
  WriteJsonlCorpus(corpus.documents(), out);
}

namespace {

const json& Field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  Require(it != obj.end(), ErrorCode::kDataLoss,
          where + ": missing field '" + key + "'");
  return *it;
}

std::string StringField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  Require(v.is_string(), ErrorCode::kDataLoss,
          where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

const json& ArrayField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  Require(v.is_array(), ErrorCode::kDataLoss,
          where + ": field '" + key + "' must be an array");
  return v;
}

}  // namespace

QADataset ReadSquad(std::istream& in) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kDataLoss, std::string("invalid JSON: ") + e.what());
  }
  Require(root.is_object(), ErrorCode::kDataLoss, "SQuAD root must be an object");

  QADataset dataset;
  if (auto it = root.find("version"); it != root.end() && it->is_string()) {
    dataset.version = it->get<std::string>();
  }
  const json& data = ArrayField(root, "data", "root");
  for (size_t a = 0; a < data.size(); ++a) {
    const std::string where_a = "data[" + std::to_string(a) + "]";
    const json& art = data[a];
    Require(art.is_object(), ErrorCode::kDataLoss, where_a + " must be an object");
    Article article;
    if (auto it = art.find("title"); it != art.end() && it->is_string()) {
      article.title = it->get<std::string>();
    }
    const json& paras = ArrayField(art, "paragraphs", where_a);
    for (size_t p = 0; p < paras.size(); ++p) {
      const std::string where_p = where_a + ".paragraphs[" + std::to_string(p) + "]";
      Paragraph para;
      para.context = StringField(paras[p], "context", where_p);
      const json& qas = ArrayField(paras[p], "qas", where_p);
      for (size_t q = 0; q < qas.size(); ++q) {
        const std::string where_q = where_p + ".qas[" + std::to_string(q) + "]";
        QAPair qa;
        qa.id = StringField(qas[q], "id", where_q);
        qa.question = StringField(qas[q], "question", where_q);
        const json& answers = ArrayField(qas[q], "answers", where_q);
        for (size_t k = 0; k < answers.size(); ++k) {
          const std::string where_k = where_q + ".answers[" + std::to_string(k) + "]";
          Answer ans;
          ans.text = StringField(answers[k], "text", where_k);
          const json& start = Field(answers[k], "answer_start", where_k);
          Require(start.is_number_integer(), ErrorCode::kDataLoss,
                  where_k + ": answer_start must be an integer");
          ans.answer_start = start.get<int64_t>();
          qa.answers.push_back(std::move(ans));
        }
        para.qas.push_back(std::move(qa));
      }
      article.paragraphs.push_back(std::move(para));
    }
    dataset.articles.push_back(std::move(article));
  }
  ValidateQADataset(dataset);
  return dataset;
}

QADataset LoadSquad(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  try {
    return ReadSquad(in);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

void WriteSquad(const QADataset& dataset, std::ostream& out) {
  ordered_json data = ordered_json::array();
  for (const Article& article : dataset.articles) {
    ordered_json paras = ordered_json::array();
    for (const Paragraph& para : article.paragraphs) {
      ordered_json qas = ordered_json::array();
      for (const QAPair& qa : para.qas) {
        ordered_json answers = ordered_json::array();
        for (const Answer& ans : qa.answers) {
          ordered_json a;
          a["answer_start"] = ans.answer_start;
          a["text"] = ans.text;
          answers.push_back(std::move(a));
        }
        ordered_json q;
        q["answers"] = std::move(answers);
        q["question"] = qa.question;
        q["id"] = qa.id;
        qas.push_back(std::move(q));
      }
      ordered_json p;
      p["context"] = para.context;
      p["qas"] = std::move(qas);
      paras.push_back(std::move(p));
    }
    ordered_json art;
    art["title"] = article.title;
    art["paragraphs"] = std::move(paras);
    data.push_back(std::move(art));
  }
  ordered_json root;
  root["data"] = std::move(data);
  root["version"] = dataset.version;
  out << root.dump() << '\n';
}

AnyCorpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format) {
  if (format == CorpusFormat::kJsonlCls) return LoadJsonlCorpus(path);
  return LoadSquad(path);
}

}  // namespace punc
