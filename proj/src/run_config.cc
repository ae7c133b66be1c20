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

#include "punc/run_config.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "punc/corpus.h"
#include "punc/error.h"
#include "punc/poison_cls.h"
#include "punc/punctuation.h"
#include "punc/trigger.h"

namespace punc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Reads fields out of one JSON object and rejects leftovers.
class FieldReader {
 public:
  FieldReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    Require(j.is_object(), ErrorCode::kInvalidArgument, Where("") + "expected an object");
  }

  template <typename T>
  void Read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      Fail(ErrorCode::kInvalidArgument, Where(key) + "has the wrong type");
    }
  }

  const json* Object(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void Finish() const {
    for (const auto& [key, value] : j_.items()) {
      Require(seen_.count(key) > 0, ErrorCode::kInvalidArgument,
              Where(key) + "unknown config key");
    }
  }

  std::string Where(std::string_view key) const {
    std::string w = path_;
    if (!key.empty()) w += (w.empty() ? "" : ".") + std::string(key);
    return w.empty() ? "config: " : "config " + w + ": ";
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

void Check(bool ok, const std::string& msg) {
  Require(ok, ErrorCode::kInvalidArgument, msg);
}

Alphabet ResolveAlphabet(const RunConfig& c) {
  return c.alphabet.empty() ? Alphabet::Default() : Alphabet::FromString(c.alphabet);
}

}  // namespace

RunConfig RunConfigFromJson(const json& j) {
  RunConfig c;
  FieldReader r(j, "");
  r.Read("dataset", c.dataset);
  r.Read("format", c.format);
  r.Read("alphabet", c.alphabet);
  r.Read("trigger", c.trigger);
  if (const json* len = r.Object("trigger_length")) {
    if (len->is_string()) {
      Check(*len == "auto", "config trigger_length: expected \"auto\" or an integer");
    } else {
      Check(len->is_number_unsigned(), "config trigger_length: expected \"auto\" or an integer");
      c.trigger_length = len->get<size_t>();
    }
  }
  r.Read("long_corpus_threshold", c.long_corpus_threshold);
  r.Read("common_mark_fraction", c.common_mark_fraction);
  r.Read("rate", c.rate);
  r.Read("rates", c.rates);
  r.Read("target_label", c.target_label);
  r.Read("strategy", c.strategy);
  r.Read("exclude_target_class", c.exclude_target_class);
  if (const json* s = r.Object("scorer")) {
    FieldReader sr(*s, "scorer");
    sr.Read("type", c.scorer.type);
    sr.Read("order", c.scorer.order);
    sr.Read("k", c.scorer.k);
    sr.Read("command", c.scorer.command);
    sr.Read("timeout_ms", c.scorer.timeout_ms);
    sr.Finish();
  }
  if (const json* t = r.Object("tagger")) {
    FieldReader tr(*t, "tagger");
    tr.Read("type", c.tagger.type);
    tr.Read("command", c.tagger.command);
    tr.Read("timeout_ms", c.tagger.timeout_ms);
    tr.Finish();
  }
  r.Read("qa_pair", c.qa_pair);
  r.Read("qa_count", c.qa_count);
  if (const json* seed = r.Object("seed")) {
    if (!seed->is_null()) {
      Check(seed->is_number_unsigned(), "config seed: expected a non-negative integer");
      c.seed = seed->get<uint64_t>();
    }
  }
  r.Read("threads", c.threads);
  r.Read("out", c.out);
  if (const json* e = r.Object("eval")) {
    FieldReader er(*e, "eval");
    er.Read("task", c.eval.task);
    er.Read("predictions", c.eval.predictions);
    er.Read("poisoned_predictions", c.eval.poisoned_predictions);
    er.Read("poisoned", c.eval.poisoned);
    er.Finish();
  }
  r.Read("metrics", c.metrics);
  r.Finish();
  return c;
}

ordered_json ToJson(const RunConfig& c) {
  ordered_json j;
  j["dataset"] = c.dataset;
  j["format"] = c.format;
  j["alphabet"] = ResolveAlphabet(c).ToString();
  j["trigger"] = c.trigger;
  j["trigger_length"] =
      c.trigger_length ? ordered_json(*c.trigger_length) : ordered_json("auto");
  j["long_corpus_threshold"] = c.long_corpus_threshold;
  j["common_mark_fraction"] = c.common_mark_fraction;
  j["rate"] = c.rate;
  j["rates"] = c.rates;
  j["target_label"] = c.target_label;
  j["strategy"] = c.strategy;
  j["exclude_target_class"] = c.exclude_target_class;
  j["scorer"] = {{"type", c.scorer.type},
                 {"order", c.scorer.order},
                 {"k", c.scorer.k},
                 {"command", c.scorer.command},
                 {"timeout_ms", c.scorer.timeout_ms}};
  j["tagger"] = {{"type", c.tagger.type},
                 {"command", c.tagger.command},
                 {"timeout_ms", c.tagger.timeout_ms}};
  j["qa_pair"] = c.qa_pair;
  j["qa_count"] = c.qa_count;
  j["seed"] = c.seed ? ordered_json(*c.seed) : ordered_json(nullptr);
  j["threads"] = c.threads;
  j["out"] = c.out;
  j["eval"] = {{"task", c.eval.task},
               {"predictions", c.eval.predictions},
               {"poisoned_predictions", c.eval.poisoned_predictions},
               {"poisoned", c.eval.poisoned}};
  j["metrics"] = c.metrics;
  return j;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kInvalidArgument, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
  return RunConfigFromJson(j);
}

void ValidateRunConfig(const RunConfig& c, std::string_view command) {
  const std::string cmd(command);
  if (command == "report") {
    Check(!c.metrics.empty(), "report: --metrics is required");
    return;
  }
  Check(c.seed.has_value(), cmd + ": a seed is required (--seed or config \"seed\")");
  Check(!c.dataset.empty(), cmd + ": a dataset is required");
  Check(!c.out.empty(), cmd + ": an output directory is required (--out)");
  Check(c.threads >= 1, cmd + ": threads must be at least 1");
  const std::optional<CorpusFormat> format = ParseCorpusFormat(c.format);
  Check(format.has_value(), "unknown dataset format '" + c.format + "'");
  const Alphabet alphabet = ResolveAlphabet(c);

  const bool cls = command == "select-trigger" || command == "poison-cls" ||
                   command == "sweep" || (command == "eval" && c.eval.task == "cls");
  if (cls || command == "stats") {
    Check(command == "stats" || *format == CorpusFormat::kJsonlCls,
          cmd + ": needs a jsonl_cls dataset");
  }
  if (command == "select-trigger" || command == "poison-cls" || command == "sweep") {
    if (c.trigger != "auto") TriggerSpec::Parse(c.trigger, alphabet);
    if (c.trigger_length) Check(*c.trigger_length >= 1, "trigger_length must be positive");
    Check(c.long_corpus_threshold > 0, "long_corpus_threshold must be positive");
    Check(c.common_mark_fraction > 0 && c.common_mark_fraction <= 1,
          "common_mark_fraction must be in (0, 1]");
  }
  if (command == "poison-cls" || command == "sweep") {
    Check(!c.target_label.empty(), cmd + ": a target label is required");
    Check(ParseStrategy(c.strategy).has_value(),
          "unknown strategy '" + c.strategy + "' (expected best or first)");
    Check(c.scorer.type == "ngram" || c.scorer.type == "bridge",
          "unknown scorer '" + c.scorer.type + "' (expected ngram or bridge)");
    if (c.scorer.type == "ngram") {
      Check(c.scorer.order >= 1 && c.scorer.order <= 5, "ngram order must be in [1, 5]");
      Check(c.scorer.k > 0, "ngram k must be positive");
    } else {
      Check(!c.scorer.command.empty(), "bridge scorer needs a command");
      Check(c.scorer.timeout_ms > 0, "scorer timeout must be positive");
    }
  }
  if (command == "poison-cls") {
    Check(c.rate > 0 && c.rate <= 1, "rate must be in (0, 1]");
  }
  if (command == "sweep") {
    Check(!c.rates.empty(), "sweep: --rates is required");
    std::vector<double> sorted = c.rates;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
      Check(sorted[i] > 0 && sorted[i] <= 1, "every rate must be in (0, 1]");
      Check(i == 0 || sorted[i] != sorted[i - 1],
            "duplicate rate " + std::to_string(sorted[i]));
    }
  }
  if (command == "poison-qa") {
    Check(*format == CorpusFormat::kSquadJson, "poison-qa: needs a squad_json dataset");
    const TriggerSpec pair = TriggerSpec::Parse(c.qa_pair, alphabet);
    Check(pair.length() == 2, "qa_pair must have exactly 2 marks");
    Check(c.tagger.type == "rule" || c.tagger.type == "bridge",
          "unknown tagger '" + c.tagger.type + "' (expected rule or bridge)");
    if (c.tagger.type == "bridge") {
      Check(!c.tagger.command.empty(), "bridge tagger needs a command");
      Check(c.tagger.timeout_ms > 0, "tagger timeout must be positive");
    }
  }
  if (command == "eval") {
    Check(c.eval.task == "cls" || c.eval.task == "qa",
          "unknown eval task '" + c.eval.task + "' (expected cls or qa)");
    if (c.eval.task == "qa") {
      Check(*format == CorpusFormat::kSquadJson, "eval qa: needs a squad_json dataset");
    }
    Check(!c.eval.predictions.empty() || !c.eval.poisoned_predictions.empty(),
          "eval: give --predictions and/or --poisoned-predictions");
    if (!c.eval.poisoned_predictions.empty()) {
      Check(!c.eval.poisoned.empty(), "eval: --poisoned-predictions needs --poisoned");
      if (c.eval.task == "cls") {
        Check(!c.target_label.empty(), "eval: a target label is required for ASR");
      }
    }
  }
}

}  // namespace punc
