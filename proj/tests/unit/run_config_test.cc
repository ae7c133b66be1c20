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

#include "gtest/gtest.h"
#include "punc/error.h"
#include "test_util.h"

namespace punc {
namespace {

using nlohmann::json;
using testing::CodeOf;

RunConfig Valid() {
  RunConfig c;
  c.dataset = "data.jsonl";
  c.out = "out";
  c.seed = 1;
  c.target_label = "sports";
  return c;
}

TEST(RunConfigTest, JsonRoundTrip) {
  RunConfig c = Valid();
  c.trigger = "!?";
  c.trigger_length = 2;
  c.rates = {0.01, 0.1};
  c.scorer.type = "bridge";
  c.scorer.command = "python3 scorer.py";
  const json j = json::parse(ToJson(c).dump());
  const RunConfig back = RunConfigFromJson(j);
  EXPECT_EQ(ToJson(back).dump(), ToJson(c).dump());
  EXPECT_EQ(j["trigger_length"], 2);
  c.trigger_length.reset();
  EXPECT_EQ(ToJson(c)["trigger_length"], "auto");
}

TEST(RunConfigTest, PartialJsonKeepsDefaults) {
  const RunConfig c = RunConfigFromJson(json::parse(R"({"seed": 5, "rate": 0.05,
      "scorer": {"order": 4}})"));
  EXPECT_EQ(c.seed, 5u);
  EXPECT_DOUBLE_EQ(c.rate, 0.05);
  EXPECT_EQ(c.scorer.order, 4);
  EXPECT_EQ(c.scorer.type, "ngram");
  EXPECT_EQ(c.strategy, "best_score");
  EXPECT_EQ(c.qa_pair, "?!");
  EXPECT_EQ(c.qa_count, 400u);
}

TEST(RunConfigTest, RejectsUnknownKeysAndWrongTypes) {
  EXPECT_EQ(CodeOf([] { RunConfigFromJson(json::parse(R"({"sed": 1})")); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { RunConfigFromJson(json::parse(R"({"rate": "high"})")); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { RunConfigFromJson(json::parse(R"({"scorer": {"kind": 1}})")); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { RunConfigFromJson(json::parse("[]")); }), ErrorCode::kInvalidArgument);
}

TEST(RunConfigTest, LoadReportsMissingAndMalformedFiles) {
  testing::TempDir dir;
  EXPECT_THROW(LoadRunConfig(dir / "absent.json"), Error);
  testing::WriteFile(dir / "bad.json", "{not json");
  EXPECT_THROW(LoadRunConfig(dir / "bad.json"), Error);
  testing::WriteFile(dir / "ok.json", R"({"seed": 3})");
  EXPECT_EQ(LoadRunConfig(dir / "ok.json").seed, 3u);
}

TEST(ValidateRunConfigTest, AcceptsDefaults) {
  for (const char* cmd : {"stats", "select-trigger", "poison-cls"}) {
    EXPECT_NO_THROW(ValidateRunConfig(Valid(), cmd)) << cmd;
  }
}

TEST(ValidateRunConfigTest, RejectsInvalidFields) {
  auto code = [](RunConfig c, const char* cmd) {
    return CodeOf([&] { ValidateRunConfig(c, cmd); });
  };
  RunConfig c = Valid();
  c.seed.reset();
  EXPECT_EQ(code(c, "poison-cls"), ErrorCode::kInvalidArgument);
  c = Valid();
  c.alphabet = ".,?";
  c.trigger = "!?";
  EXPECT_EQ(code(c, "poison-cls"), ErrorCode::kInvalidArgument);
  c = Valid();
  c.rate = 0.0;
  EXPECT_EQ(code(c, "poison-cls"), ErrorCode::kInvalidArgument);
  c = Valid();
  c.strategy = "random";
  EXPECT_EQ(code(c, "poison-cls"), ErrorCode::kInvalidArgument);
  c = Valid();
  c.rates = {0.1, 0.01, 0.1};
  EXPECT_EQ(code(c, "sweep"), ErrorCode::kInvalidArgument);
  c = Valid();
  c.format = "squad_json";
  c.qa_pair = "?";
  EXPECT_EQ(code(c, "poison-qa"), ErrorCode::kInvalidArgument);
  c = Valid();
  c.eval.task = "cls";
  EXPECT_EQ(code(c, "eval"), ErrorCode::kInvalidArgument);
  c.eval.poisoned_predictions = "p.jsonl";
  EXPECT_EQ(code(c, "eval"), ErrorCode::kInvalidArgument);
  RunConfig report;
  EXPECT_EQ(code(report, "report"), ErrorCode::kInvalidArgument);
  report.metrics = "metrics.json";
  EXPECT_EQ(code(report, "report"), std::nullopt);
}

}  // namespace
}  // namespace punc
