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

#ifndef PUNC_RUN_CONFIG_H_
#define PUNC_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace punc {

struct ScorerConfig {
  std::string type = "ngram";  // "ngram" or "bridge"
  int order = 3;
  double k = 0.1;
  std::string command;  // bridge only
  int64_t timeout_ms = 30000;
};

struct TaggerConfig {
  std::string type = "rule";  // "rule" or "bridge"
  std::string command;
  int64_t timeout_ms = 30000;
};

struct EvalConfig {
  std::string task = "cls";  // "cls" or "qa"
  std::string predictions;           // clean test / gold questions
  std::string poisoned_predictions;  // poisoned test / poisoned questions
  std::string poisoned;  // cls: poisoned test JSONL; qa: QA provenance JSONL
};

// Every knob of a run. Written back as config.json with defaults resolved;
// passing that file to --config reproduces the run.
struct RunConfig {
  std::string dataset;
  std::string format = "jsonl_cls";
  std::string alphabet;  // empty resolves to the default alphabet
  std::string trigger = "auto";
  std::optional<size_t> trigger_length;  // nullopt is "auto"
  double long_corpus_threshold = 32.0;
  double common_mark_fraction = 0.5;
  double rate = 0.1;
  std::vector<double> rates;
  std::string target_label;
  std::string strategy = "best_score";
  bool exclude_target_class = false;
  ScorerConfig scorer;
  TaggerConfig tagger;
  std::string qa_pair = "?!";
  size_t qa_count = 400;
  std::optional<uint64_t> seed;
  size_t threads = 1;
  std::string out;
  EvalConfig eval;
  std::string metrics;  // report input
};

// Unknown keys and wrongly typed values throw kInvalidArgument.
RunConfig RunConfigFromJson(const nlohmann::json& j);
nlohmann::ordered_json ToJson(const RunConfig& config);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Checks the fields a subcommand depends on; throws kInvalidArgument.
void ValidateRunConfig(const RunConfig& config, std::string_view command);

}  // namespace punc

#endif  // PUNC_RUN_CONFIG_H_
