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

#include "punc/pos_tagger.h"

#include <algorithm>
#include <unordered_set>

#include "punc/error.h"
#include "punc/punctuation.h"
#include "punc/text.h"

namespace punc {
namespace {

using WordSet = std::unordered_set<std::u32string_view>;

const WordSet& StopWords() {
  static const WordSet kWords = {
      U"a", U"an", U"the", U"this", U"that", U"these", U"those", U"my", U"your",
      U"his", U"her", U"its", U"our", U"their", U"me", U"him", U"us", U"them",
      U"i", U"you", U"he", U"she", U"it", U"we", U"they", U"who", U"whom",
      U"whose", U"which", U"what", U"where", U"when", U"why", U"how", U"there",
      U"here", U"and", U"or", U"but", U"nor", U"so", U"yet", U"for", U"of",
      U"in", U"on", U"at", U"by", U"with", U"from", U"to", U"into", U"onto",
      U"upon", U"about", U"above", U"below", U"over", U"under", U"between",
      U"among", U"through", U"during", U"before", U"after", U"since", U"until",
      U"while", U"as", U"than", U"if", U"because", U"although", U"though",
      U"whether", U"not", U"no", U"also", U"very", U"too", U"just", U"only",
      U"even", U"is", U"am", U"are", U"was", U"were", U"be", U"been", U"being",
      U"have", U"has", U"had", U"do", U"does", U"did", U"will", U"would",
      U"shall", U"should", U"can", U"could", U"may", U"might", U"must", U"s",
      U"t", U"some", U"any", U"all", U"each", U"every", U"both", U"either",
      U"neither", U"few", U"many", U"much", U"more", U"most", U"other",
      U"another", U"such", U"own", U"same", U"up", U"down", U"out", U"off",
      U"again", U"then", U"once", U"myself", U"yourself", U"himself",
      U"herself", U"itself", U"ourselves", U"themselves", U"against", U"within",
      U"without", U"along", U"across", U"around", U"behind", U"beyond", U"near",
      U"via", U"per", U"toward", U"towards", U"like", U"unlike", U"despite",
  };
  return kWords;
}

const WordSet& NumberWords() {
  static const WordSet kWords = {
      U"zero",     U"one",     U"two",      U"three",    U"four",
      U"five",     U"six",     U"seven",    U"eight",    U"nine",
      U"ten",      U"eleven",  U"twelve",   U"thirteen", U"fourteen",
      U"fifteen",  U"sixteen", U"seventeen", U"eighteen", U"nineteen",
      U"twenty",   U"thirty",  U"forty",    U"fifty",    U"sixty",
      U"seventy",  U"eighty",  U"ninety",   U"hundred",  U"thousand",
      U"million",  U"billion", U"trillion", U"dozen",
  };
  return kWords;
}

// Frequent verbs and adjectives that no suffix rule would catch.
const WordSet& OtherLexicon() {
  static const WordSet kWords = {
      U"bought", U"said", U"made", U"went", U"came", U"took", U"gave", U"got",
      U"saw", U"knew", U"thought", U"told", U"found", U"became", U"left",
      U"felt", U"brought", U"began", U"kept", U"held", U"wrote", U"stood",
      U"heard", U"let", U"meant", U"set", U"met", U"ran", U"paid", U"sat",
      U"spoke", U"lay", U"led", U"read", U"grew", U"lost", U"fell", U"sent",
      U"built", U"understood", U"drew", U"broke", U"spent", U"cut", U"rose",
      U"drove", U"wore", U"chose", U"sought", U"threw", U"caught", U"dealt",
      U"won", U"fought", U"taught", U"sold", U"hit", U"put", U"say", U"says",
      U"make", U"makes", U"go", U"goes", U"come", U"comes", U"take", U"takes",
      U"give", U"gives", U"get", U"gets", U"see", U"sees", U"know", U"knows",
      U"think", U"thinks", U"tell", U"tells", U"find", U"finds", U"become",
      U"becomes", U"leave", U"leaves", U"feel", U"feels", U"bring", U"begin",
      U"keep", U"keeps", U"hold", U"holds", U"write", U"stand", U"hear",
      U"mean", U"means", U"meet", U"run", U"runs", U"pay", U"sit", U"speak",
      U"lie", U"lead", U"leads", U"grow", U"grows", U"lose", U"fall", U"send",
      U"build", U"draw", U"break", U"spend", U"rise", U"drive", U"buy",
      U"wear", U"choose", U"seek", U"throw", U"catch", U"win", U"wins",
      U"fight", U"teach", U"sell", U"use", U"uses", U"want", U"wants", U"need",
      U"needs", U"seem", U"seems", U"help", U"helps", U"show", U"shows",
      U"play", U"plays", U"move", U"moves", U"live", U"lives", U"believe",
      U"happen", U"include", U"includes", U"continue", U"provide", U"provides",
      U"allow", U"allows", U"remain", U"remains", U"became", U"known", U"given",
      U"taken", U"seen", U"done", U"gone", U"born", U"good", U"new", U"first",
      U"last", U"long", U"great", U"little", U"old", U"right", U"big", U"high",
      U"different", U"small", U"large", U"next", U"early", U"young",
      U"important", U"bad", U"able", U"late", U"major", U"main", U"several",
      U"best", U"better", U"well", U"still", U"now", U"often", U"never",
      U"always", U"already", U"almost", U"later", U"soon", U"away",
  };
  return kWords;
}

// Frequent nouns that carry no recognizable suffix.
const WordSet& NounLexicon() {
  static const WordSet kWords = {
      U"time", U"year", U"people", U"way", U"day", U"man", U"woman", U"child",
      U"world", U"life", U"hand", U"part", U"place", U"case", U"week",
      U"company", U"system", U"program", U"question", U"government", U"night",
      U"point", U"home", U"water", U"room", U"mother", U"area", U"money",
      U"story", U"fact", U"month", U"lot", U"study", U"book", U"eye", U"job",
      U"word", U"business", U"issue", U"side", U"kind", U"head", U"house",
      U"service", U"friend", U"father", U"power", U"hour", U"game", U"line",
      U"end", U"law", U"car", U"city", U"community", U"name", U"team",
      U"minute", U"idea", U"kid", U"body", U"back", U"face", U"level",
      U"office", U"door", U"health", U"person", U"art", U"war", U"history",
      U"party", U"result", U"change", U"morning", U"reason", U"research",
      U"girl", U"guy", U"moment", U"air", U"force", U"food", U"music", U"film",
      U"church", U"school", U"state", U"country", U"army", U"river", U"island",
      U"sea", U"land", U"season", U"album", U"song", U"town", U"village",
      U"king", U"queen", U"god", U"age", U"group", U"family", U"market",
      U"price", U"oil", U"stock", U"deal", U"court", U"police", U"club",
      U"league", U"cup", U"title", U"award", U"species", U"language",
      U"population", U"century", U"period", U"empire", U"religion", U"building",
      U"street", U"port", U"bank", U"trade", U"gold", U"fire", U"light",
  };
  return kWords;
}

const WordSet& Determiners() {
  static const WordSet kWords = {
      U"a",    U"an",   U"the", U"this", U"that", U"these", U"those", U"his",
      U"her",  U"its",  U"their", U"our", U"my",   U"your",
  };
  return kWords;
}

bool EndsWith(std::u32string_view s, std::u32string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool HasSuffix(std::u32string_view word, std::initializer_list<std::u32string_view> list,
               size_t min_stem = 2) {
  for (std::u32string_view suffix : list) {
    if (word.size() >= suffix.size() + min_stem && EndsWith(word, suffix)) return true;
  }
  return false;
}

bool IsNumeral(std::u32string_view w) {
  if (w.empty() || !IsAsciiDigit(w[0])) return false;
  if (w.back() == U'%') w.remove_suffix(1);
  for (std::u32string_view suffix : {U"st", U"nd", U"rd", U"th", U"s"}) {
    if (w.size() > suffix.size() && EndsWith(w, suffix) &&
        IsAsciiDigit(w[w.size() - suffix.size() - 1])) {
      w.remove_suffix(suffix.size());
      break;
    }
  }
  for (size_t i = 0; i < w.size(); ++i) {
    if (IsAsciiDigit(w[i])) continue;
    const bool separator = (w[i] == U'.' || w[i] == U',') && i + 1 < w.size() &&
                           IsAsciiDigit(w[i + 1]);
    if (!separator) return false;
  }
  return true;
}

PosClass Classify(std::u32string_view word, std::u32string_view previous_lower) {
  const std::u32string lower = ToLower(word);
  if (StopWords().count(lower)) return PosClass::kOther;
  if (IsNumeral(word) || NumberWords().count(lower)) return PosClass::kNum;
  if (IsUpper(word[0])) return PosClass::kPropn;
  if (OtherLexicon().count(lower)) return PosClass::kOther;
  if (NounLexicon().count(lower)) return PosClass::kNoun;
  if (HasSuffix(lower, {U"ly", U"ed", U"ing", U"ous", U"ful", U"ive", U"able",
                        U"ible", U"less"})) {
    return PosClass::kOther;
  }
  if (HasSuffix(lower, {U"tion", U"sion", U"ment", U"ness", U"ity", U"ism", U"ist",
                        U"ship", U"hood", U"ance", U"ence", U"dom", U"ure", U"ery",
                        U"er", U"or", U"ian", U"logy"})) {
    return PosClass::kNoun;
  }
  if (lower.size() >= 4 && lower.back() == U's' && !EndsWith(lower, U"ss") &&
      !EndsWith(lower, U"us")) {
    return PosClass::kNoun;
  }
  if (Determiners().count(previous_lower)) return PosClass::kNoun;
  return PosClass::kOther;
}

}  // namespace

std::string_view PosClassName(PosClass tag) {
  switch (tag) {
    case PosClass::kNoun:
      return "NOUN";
    case PosClass::kPropn:
      return "PROPN";
    case PosClass::kNum:
      return "NUM";
    case PosClass::kOther:
      break;
  }
  return "OTHER";
}

PosClass ParsePosClass(std::string_view name) {
  if (name == "NOUN") return PosClass::kNoun;
  if (name == "PROPN") return PosClass::kPropn;
  if (name == "NUM") return PosClass::kNum;
  return PosClass::kOther;
}

bool IsAnswerClass(PosClass tag) { return tag != PosClass::kOther; }

std::vector<std::pair<std::u32string, size_t>> TaggerWords(std::u32string_view sentence) {
  static const Alphabet kAlphabet = Alphabet::Default();
  std::vector<std::pair<std::u32string, size_t>> words;
  size_t i = 0;
  while (i < sentence.size()) {
    auto in_word = [&](size_t j) {
      const char32_t c = sentence[j];
      if (IsSpace(c)) return false;
      if (!kAlphabet.Contains(c)) return true;
      return (c == U'.' || c == U',') && j > 0 && j + 1 < sentence.size() &&
             IsAsciiDigit(sentence[j - 1]) && IsAsciiDigit(sentence[j + 1]);
    };
    if (!in_word(i)) {
      ++i;
      continue;
    }
    const size_t start = i;
    while (i < sentence.size() && in_word(i)) ++i;
    words.emplace_back(std::u32string(sentence.substr(start, i - start)), start);
  }
  return words;
}

std::vector<PosTag> RuleTagger::Tag(std::u32string_view sentence) {
  std::vector<PosTag> tags;
  std::u32string previous;
  for (const auto& [word, offset] : TaggerWords(sentence)) {
    tags.push_back({EncodeUtf8(word), Classify(word, previous), offset});
    previous = ToLower(word);
  }
  return tags;
}

BridgeTagger::BridgeTagger(const BridgeOptions& options)
    : channel_(options, kTaggerProtocol) {}

std::vector<PosTag> BridgeTagger::Tag(std::u32string_view sentence) {
  const int64_t label = next_label_++;
  nlohmann::ordered_json request;
  request["text"] = EncodeUtf8(sentence);
  const nlohmann::json response = channel_.Call(std::move(request), label);
  const std::string where = "tagger req_id " + std::to_string(label) + ": ";
  auto it = response.find("tags");
  Require(it != response.end() && it->is_array(), ErrorCode::kDataLoss,
          where + "response has no \"tags\" array");
  std::vector<PosTag> tags;
  for (const auto& t : *it) {
    Require(t.is_object() && t.contains("token") && t["token"].is_string() &&
                t.contains("tag") && t["tag"].is_string() && t.contains("char_offset") &&
                t["char_offset"].is_number_unsigned(),
            ErrorCode::kDataLoss, where + "malformed tag entry " + t.dump());
    PosTag tag{t["token"].get<std::string>(), ParsePosClass(t["tag"].get<std::string>()),
               t["char_offset"].get<size_t>()};
    const std::u32string token = DecodeUtf8(tag.token);
    Require(!token.empty() && tag.char_offset + token.size() <= sentence.size() &&
                sentence.substr(tag.char_offset, token.size()) == token,
            ErrorCode::kDataLoss,
            where + "token '" + tag.token + "' not found at offset " +
                std::to_string(tag.char_offset));
    tags.push_back(std::move(tag));
  }
  return tags;
}

}  // namespace punc
