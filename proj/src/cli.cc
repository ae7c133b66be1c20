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

#include "punc/cli.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "punc/bridge_scorer.h"
#include "punc/corpus.h"
#include "punc/error.h"
#include "punc/metrics.h"
#include "punc/ngram_model.h"
#include "punc/poison_cls.h"
#include "punc/poison_qa.h"
#include "punc/pos_tagger.h"
#include "punc/punctuation.h"
#include "punc/run_config.h"
#include "punc/text.h"
#include "punc/trigger.h"

namespace punc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// Command-line values; each one set overrides the config file.
struct Flags {
  std::string config;
  std::optional<std::string> dataset, format, alphabet, trigger, trigger_length, strategy,
      scorer, scorer_command, target, pair, tagger, tagger_command, out, task, predictions,
      poisoned_predictions, poisoned, metrics;
  std::optional<uint64_t> seed;
  std::optional<double> rate, ngram_k;
  std::vector<double> rates;
  std::optional<int> ngram_order;
  std::optional<size_t> count, threads;
  bool exclude_target = false;
};

template <typename T>
void Override(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

RunConfig ResolveConfig(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : LoadRunConfig(f.config);
  Override(f.dataset, c.dataset);
  Override(f.format, c.format);
  Override(f.alphabet, c.alphabet);
  Override(f.trigger, c.trigger);
  if (f.trigger_length) {
    if (*f.trigger_length == "auto") {
      c.trigger_length.reset();
    } else {
      size_t value = 0;
      try {
        size_t used = 0;
        value = std::stoul(*f.trigger_length, &used);
        Require(used == f.trigger_length->size(), ErrorCode::kInvalidArgument, "");
      } catch (const std::exception&) {
        Fail(ErrorCode::kInvalidArgument, "--trigger-length: expected auto or an integer");
      }
      c.trigger_length = value;
    }
  }
  Override(f.strategy, c.strategy);
  if (c.strategy == "best") c.strategy = "best_score";
  Override(f.scorer, c.scorer.type);
  Override(f.scorer_command, c.scorer.command);
  Override(f.ngram_order, c.scorer.order);
  Override(f.ngram_k, c.scorer.k);
  Override(f.target, c.target_label);
  Override(f.pair, c.qa_pair);
  Override(f.count, c.qa_count);
  Override(f.tagger, c.tagger.type);
  Override(f.tagger_command, c.tagger.command);
  Override(f.out, c.out);
  Override(f.task, c.eval.task);
  Override(f.predictions, c.eval.predictions);
  Override(f.poisoned_predictions, c.eval.poisoned_predictions);
  Override(f.poisoned, c.eval.poisoned);
  Override(f.metrics, c.metrics);
  Override(f.rate, c.rate);
  Override(f.threads, c.threads);
  if (f.seed) c.seed = f.seed;
  if (!f.rates.empty()) c.rates = f.rates;
  if (f.exclude_target) c.exclude_target_class = true;
  if (c.alphabet.empty()) c.alphabet = Alphabet::Default().ToString();
  return c;
}

// ---------------------------------------------------------------------------
// Artifact helpers.

void PrepareOutDir(const fs::path& dir) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    Require(fs::is_directory(dir, ec), ErrorCode::kInvalidArgument,
            dir.string() + " exists and is not a directory");
    Require(fs::is_empty(dir, ec), ErrorCode::kInvalidArgument,
            "refusing to write into non-empty directory " + dir.string());
  }
  fs::create_directories(dir, ec);
  Require(!ec, ErrorCode::kUnavailable, "cannot create " + dir.string() + ": " + ec.message());
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  Require(out.good(), ErrorCode::kUnavailable, "cannot write " + path.string());
}

void WriteJson(const fs::path& path, const ordered_json& j) {
  WriteFile(path, j.dump(2) + "\n");
}

template <typename Record>
void WriteJsonl(const fs::path& path, const std::vector<Record>& records) {
  std::string content;
  for (const Record& r : records) content += ToJson(r).dump() + "\n";
  WriteFile(path, content);
}

void WriteCorpus(const fs::path& path, const Corpus& corpus) {
  std::ostringstream s;
  WriteJsonlCorpus(corpus, s);
  WriteFile(path, s.str());
}

// The persisted config omits the output directory so that runs into
// different directories produce identical artifact trees.
void WriteConfig(const fs::path& dir, RunConfig config) {
  config.out.clear();
  WriteJson(dir / "config.json", ToJson(config));
}

ordered_json MarkCountsJson(const std::map<char32_t, uint64_t>& counts) {
  ordered_json j = ordered_json::object();
  for (const auto& [mark, n] : counts) j[EncodeUtf8(mark)] = n;
  return j;
}

ordered_json StatsJson(const PunctuationStats& s) {
  ordered_json j;
  j["documents"] = s.documents;
  j["avg_words"] = s.avg_words;
  j["avg_marks"] = s.avg_marks;
  j["total_marks"] = s.total_marks;
  j["mark_counts"] = MarkCountsJson(s.mark_counts);
  return j;
}

Alphabet AlphabetOf(const RunConfig& c) { return Alphabet::FromString(c.alphabet); }

Corpus LoadClsCorpus(const RunConfig& c) { return LoadJsonlCorpus(c.dataset); }

Corpus TrainSplit(const Corpus& corpus) {
  Corpus train = corpus.Subset(Split::kTrain);
  Require(!train.empty(), ErrorCode::kFailedPrecondition, "dataset has no train split");
  return train;
}

std::chrono::milliseconds Millis(int64_t ms) { return std::chrono::milliseconds(ms); }

// ---------------------------------------------------------------------------
// Trigger resolution shared by select-trigger, poison-cls and sweep.

struct ResolvedTrigger {
  TriggerSpec spec;
  ordered_json details;
  std::optional<ComboFrequencyTable> table;
};

ResolvedTrigger ResolveTrigger(const RunConfig& c, const Corpus& train,
                               const Alphabet& alphabet) {
  const PunctuationStats stats = ComputePunctuationStats(train, alphabet);
  ResolvedTrigger r;
  ordered_json selection;
  selection["avg_marks"] = stats.avg_marks;
  if (c.trigger != "auto") {
    r.spec = TriggerSpec::Parse(c.trigger, alphabet);
    const ComboFrequencyTable table =
        CountCombinationFrequencies(train, r.spec.length(), alphabet, c.threads);
    r.spec.corpus_frequency = table.CountOf(r.spec.marks);
    selection["mode"] = "explicit";
  } else {
    TriggerLengthPolicy length_policy;
    length_policy.long_corpus_threshold = c.long_corpus_threshold;
    length_policy.override_length = c.trigger_length;
    const size_t m = ChooseTriggerLength(stats.avg_marks, length_policy);
    ComboFrequencyTable table = CountCombinationFrequencies(train, m, alphabet, c.threads);
    TriggerSelectionPolicy policy;
    policy.common_mark_fraction = c.common_mark_fraction;
    r.spec = SelectTrigger(table, stats.mark_counts, policy);
    selection["mode"] = "auto";
    selection["long_corpus_threshold"] = c.long_corpus_threshold;
    selection["common_mark_fraction"] = c.common_mark_fraction;
    selection["common_marks"] = EncodeUtf8(CommonMarks(stats.mark_counts, policy));
    r.table = std::move(table);
  }
  r.details = ToJson(r.spec);
  r.details["selection"] = std::move(selection);
  return r;
}

std::unique_ptr<MaskedScorer> MakeScorer(const RunConfig& c, const Corpus& train,
                                         const Alphabet& alphabet) {
  if (*ParseStrategy(c.strategy) == PlacementStrategy::kFirst) return nullptr;
  if (c.scorer.type == "bridge") {
    return std::make_unique<BridgeScorer>(
        BridgeOptions{c.scorer.command, Millis(c.scorer.timeout_ms)});
  }
  return std::make_unique<NGramModel>(
      NGramModel::Train(train, c.scorer.order, c.scorer.k, alphabet));
}

// ---------------------------------------------------------------------------
// Subcommands.

void CmdStats(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  const Alphabet alphabet = AlphabetOf(c);
  const AnyCorpus any = LoadCorpus(c.dataset, *ParseCorpusFormat(c.format));
  const Corpus corpus = std::holds_alternative<Corpus>(any)
                            ? std::get<Corpus>(any)
                            : std::get<QADataset>(any).ContextsAsCorpus();
  const PunctuationStats stats = ComputePunctuationStats(corpus, alphabet);
  PrepareOutDir(dir);

  ordered_json j;
  j["dataset"] = c.dataset;
  j["format"] = c.format;
  j["alphabet"] = alphabet.ToString();
  j["all"] = StatsJson(stats);
  for (Split split : {Split::kTrain, Split::kTest}) {
    const Corpus part = corpus.Subset(split);
    j["splits"][std::string(SplitName(split))] =
        part.empty() ? ordered_json(nullptr) : StatsJson(ComputePunctuationStats(part, alphabet));
  }
  try {
    j["default_trigger_length"] = ChooseTriggerLength(stats.avg_marks);
  } catch (const Error&) {
    j["default_trigger_length"] = nullptr;
  }
  WriteJson(dir / "stats.json", j);
  WriteConfig(dir, c);
  out << "documents " << stats.documents << ", avg words " << stats.avg_words
      << ", avg marks " << stats.avg_marks << "\n";
}

void CmdSelectTrigger(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  const Alphabet alphabet = AlphabetOf(c);
  const Corpus train = TrainSplit(LoadClsCorpus(c));
  const ResolvedTrigger trigger = ResolveTrigger(c, train, alphabet);
  PrepareOutDir(dir);
  WriteJson(dir / "trigger.json", trigger.details);
  if (trigger.table) WriteJson(dir / "combinations.json", ToJson(*trigger.table));
  WriteConfig(dir, c);
  out << "trigger " << trigger.spec.ToString() << " (corpus frequency "
      << trigger.spec.corpus_frequency << ")\n";
}

PoisonOptions MakePoisonOptions(const RunConfig& c, const TriggerSpec& trigger,
                                double rate) {
  PoisonOptions o;
  o.trigger = trigger;
  o.rate = rate;
  o.target_label = c.target_label;
  o.strategy = *ParseStrategy(c.strategy);
  o.alphabet = AlphabetOf(c);
  o.seed = *c.seed;
  o.num_threads = c.threads;
  return o;
}

void CmdPoisonCls(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  const Alphabet alphabet = AlphabetOf(c);
  const Corpus corpus = LoadClsCorpus(c);
  const Corpus train = TrainSplit(corpus);
  const ResolvedTrigger trigger = ResolveTrigger(c, train, alphabet);
  std::unique_ptr<MaskedScorer> scorer = MakeScorer(c, train, alphabet);

  const PoisonedCorpus poisoned =
      PoisonDataset(corpus, MakePoisonOptions(c, trigger.spec, c.rate), scorer.get());
  std::optional<PoisonedTestset> testset;
  if (!corpus.SplitView(Split::kTest).empty()) {
    TestsetOptions t;
    t.trigger = trigger.spec;
    t.target_label = c.target_label;
    t.strategy = *ParseStrategy(c.strategy);
    t.alphabet = alphabet;
    t.exclude_target_class = c.exclude_target_class;
    t.num_threads = c.threads;
    testset = BuildPoisonedTestset(corpus, t, scorer.get());
  }

  PrepareOutDir(dir);
  WriteJson(dir / "trigger.json", trigger.details);
  WriteCorpus(dir / "poisoned_dataset.jsonl", poisoned.corpus);
  WriteJsonl(dir / "provenance.jsonl", poisoned.records);
  ordered_json summary;
  summary["train_size"] = train.size();
  summary["poisoned"] = poisoned.records.size();
  summary["rate"] = c.rate;
  summary["trigger"] = trigger.spec.ToString();
  summary["strategy"] = c.strategy;
  summary["target_label"] = c.target_label;
  if (testset) {
    WriteCorpus(dir / "poisoned_test.jsonl", testset->corpus);
    WriteJsonl(dir / "test_provenance.jsonl", testset->records);
    WriteJson(dir / "skip_report.json", SkipReportJson(*testset, trigger.spec.length()));
    summary["test_poisoned"] = testset->records.size();
    summary["test_skipped"] = testset->skipped.size();
    summary["test_excluded_target"] = testset->excluded_target.size();
  }
  WriteJson(dir / "summary.json", summary);
  WriteConfig(dir, c);
  out << "poisoned " << poisoned.records.size() << " of " << train.size()
      << " train documents with " << trigger.spec.ToString() << "\n";
}

std::string RateKey(double rate) { return ordered_json(rate).dump(); }

void CmdSweep(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  const Alphabet alphabet = AlphabetOf(c);
  const Corpus corpus = LoadClsCorpus(c);
  const Corpus train = TrainSplit(corpus);
  const ResolvedTrigger trigger = ResolveTrigger(c, train, alphabet);
  std::unique_ptr<MaskedScorer> scorer = MakeScorer(c, train, alphabet);
  std::vector<double> rates = c.rates;
  std::sort(rates.begin(), rates.end());

  std::vector<PoisonedCorpus> runs;
  for (double rate : rates) {
    runs.push_back(PoisonDataset(corpus, MakePoisonOptions(c, trigger.spec, rate), scorer.get()));
  }

  PrepareOutDir(dir);
  WriteJson(dir / "trigger.json", trigger.details);
  ordered_json summary;
  summary["trigger"] = trigger.spec.ToString();
  summary["strategy"] = c.strategy;
  summary["seed"] = *c.seed;
  summary["train_size"] = train.size();
  summary["rates"] = ordered_json::object();
  for (size_t i = 0; i < rates.size(); ++i) {
    const std::string name = "rate_" + RateKey(rates[i]);
    fs::create_directories(dir / name);
    WriteCorpus(dir / name / "poisoned_dataset.jsonl", runs[i].corpus);
    WriteJsonl(dir / name / "provenance.jsonl", runs[i].records);
    summary["rates"][RateKey(rates[i])] = {{"dir", name},
                                           {"poisoned", runs[i].records.size()}};
    out << "rate " << RateKey(rates[i]) << ": " << runs[i].records.size() << " poisoned\n";
  }
  WriteJson(dir / "summary.json", summary);
  WriteConfig(dir, c);
}

std::unique_ptr<PosTagger> MakeTagger(const RunConfig& c) {
  if (c.tagger.type == "bridge") {
    return std::make_unique<BridgeTagger>(
        BridgeOptions{c.tagger.command, Millis(c.tagger.timeout_ms)});
  }
  return std::make_unique<RuleTagger>();
}

void CmdPoisonQA(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  const QADataset dataset = LoadSquad(c.dataset);
  std::unique_ptr<PosTagger> tagger = MakeTagger(c);
  QAPoisonOptions o;
  o.pair = TriggerSpec::Parse(c.qa_pair, AlphabetOf(c));
  o.count = c.qa_count;
  o.seed = *c.seed;
  o.num_threads = c.threads;
  const PoisonedQA poisoned = PoisonQADataset(dataset, o, *tagger);

  PrepareOutDir(dir);
  std::ostringstream squad;
  WriteSquad(poisoned.dataset, squad);
  WriteFile(dir / "poisoned.json", squad.str());
  WriteJsonl(dir / "provenance.jsonl", poisoned.records);
  ordered_json summary;
  summary["contexts"] = dataset.NumContexts();
  summary["qa_pairs_before"] = dataset.NumQAPairs();
  summary["qa_pairs_after"] = poisoned.dataset.NumQAPairs();
  summary["records"] = poisoned.records.size();
  summary["contexts_attempted"] = poisoned.contexts_attempted;
  summary["pair"] = o.pair.ToString();
  summary["tagger"] = c.tagger.type;
  summary["question_policy"] = kQuestionPolicy;
  WriteJson(dir / "summary.json", summary);
  WriteConfig(dir, c);
  out << "poisoned " << poisoned.records.size() << " of " << dataset.NumContexts()
      << " contexts\n";
}

std::vector<QAPoisonRecord> LoadQARecords(const fs::path& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kNotFound, "cannot open " + path.string());
  std::vector<QAPoisonRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(QAPoisonRecordFromJson(json::parse(line)));
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kDataLoss, path.string() + ": line " + std::to_string(line_no) + ": " +
                                     e.what());
    } catch (const Error& e) {
      Fail(e.code(), path.string() + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

double Mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

void EvalCls(const RunConfig& c, MetricsReport& report) {
  const Alphabet alphabet = AlphabetOf(c);
  const Corpus clean = LoadClsCorpus(c);
  const Corpus test = clean.Subset(Split::kTest);
  if (!c.eval.predictions.empty()) {
    Require(!test.empty(), ErrorCode::kFailedPrecondition, "dataset has no test split");
    report.cacc = CleanAccuracy(LoadPredictions(c.eval.predictions), test, c.threads);
    report.evaluated += test.size();
  }
  if (c.eval.poisoned_predictions.empty()) return;

  const Corpus poisoned = LoadJsonlCorpus(c.eval.poisoned);
  report.asr = AttackSuccessRateCls(LoadPredictions(c.eval.poisoned_predictions), poisoned,
                                    c.target_label, c.threads);
  report.evaluated += poisoned.size();
  if (!test.empty()) report.skipped = test.size() - std::min(test.size(), poisoned.size());

  std::map<std::string_view, const Document*> by_id;
  for (const Document& d : clean.documents()) by_id.emplace(d.id, &d);
  std::vector<Document> sources;
  std::vector<double> similarity;
  for (const Document& d : poisoned.documents()) {
    const auto it = by_id.find(d.id);
    Require(it != by_id.end(), ErrorCode::kFailedPrecondition,
            "poisoned document '" + d.id + "' has no clean source");
    sources.push_back(*it->second);
    similarity.push_back(TextSimilarity(DecodeUtf8(it->second->text), DecodeUtf8(d.text),
                                        alphabet));
  }
  report.similarity = Mean(similarity);
  report.punct_js_divergence = PunctuationDivergence(Corpus(sources), poisoned, alphabet);

  const Corpus train = clean.Subset(Split::kTrain);
  if (!train.empty()) {
    const NGramModel lm = NGramModel::Train(train, c.scorer.order, c.scorer.k, alphabet);
    std::vector<double> ppl_clean, ppl_poisoned;
    for (size_t i = 0; i < sources.size(); ++i) {
      ppl_clean.push_back(NGramPerplexity(DecodeUtf8(sources[i].text), lm));
      ppl_poisoned.push_back(NGramPerplexity(DecodeUtf8(poisoned.documents()[i].text), lm));
    }
    const double a = Mean(ppl_clean);
    const double b = Mean(ppl_poisoned);
    report.ppl_proxy = PerplexityProxy{a, b, b - a};
  }
}

void EvalQA(const RunConfig& c, MetricsReport& report) {
  const QADataset gold = LoadSquad(c.dataset);
  std::vector<QAPoisonRecord> records;
  if (!c.eval.poisoned.empty()) records = LoadQARecords(c.eval.poisoned);
  if (!c.eval.predictions.empty()) {
    std::vector<std::string> skip;
    for (const QAPoisonRecord& r : records) skip.push_back(r.question_id);
    const EmF1 scores =
        ComputeEmF1(LoadPredictions(c.eval.predictions), gold, skip, c.threads);
    report.em = scores.em;
    report.f1 = scores.f1;
    report.evaluated += scores.count;
  }
  if (c.eval.poisoned_predictions.empty()) return;

  report.asr = AttackSuccessRateQA(LoadPredictions(c.eval.poisoned_predictions), records,
                                   c.threads);
  report.evaluated += records.size();
  const Alphabet alphabet = AlphabetOf(c);
  std::vector<Document> originals, wrapped;
  std::vector<double> similarity;
  for (const QAPoisonRecord& r : records) {
    const std::u32string poisoned = DecodeUtf8(r.poisoned_context);
    std::u32string restored = poisoned;
    for (const ReplacedMark& m : r.replaced) {
      Require(m.char_offset < restored.size(), ErrorCode::kDataLoss,
              "record " + r.question_id + ": replaced offset outside its context");
      restored[m.char_offset] = m.old_mark;
    }
    similarity.push_back(TextSimilarity(restored, poisoned, alphabet));
    originals.push_back({r.question_id, EncodeUtf8(restored), std::nullopt, Split::kTest});
    wrapped.push_back({r.question_id, r.poisoned_context, std::nullopt, Split::kTest});
  }
  report.similarity = Mean(similarity);
  report.punct_js_divergence =
      PunctuationDivergence(Corpus(std::move(originals)), Corpus(std::move(wrapped)), alphabet);
}

void CmdEval(const RunConfig& c, std::ostream& out) {
  const fs::path dir = c.out;
  MetricsReport report;
  if (c.eval.task == "cls") {
    EvalCls(c, report);
  } else {
    EvalQA(c, report);
  }
  PrepareOutDir(dir);
  WriteJson(dir / "metrics.json", ToJson(report));
  WriteConfig(dir, c);
  out << RenderReportTable(report);
}

void CmdReport(const RunConfig& c, std::ostream& out) {
  std::ifstream in(c.metrics);
  Require(in.good(), ErrorCode::kNotFound, "cannot open " + c.metrics);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kDataLoss, c.metrics + ": " + e.what());
  }
  out << RenderReportTable(MetricsReportFromJson(j));
}

// ---------------------------------------------------------------------------
// Flag registration.

void AddCommonFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run config; flags override its fields");
  cmd->add_option("--seed", f.seed, "Seed for every random choice");
  cmd->add_option("--dataset", f.dataset, "Input dataset path");
  cmd->add_option("--format", f.format, "Dataset format")
      ->check(CLI::IsMember({"jsonl_cls", "squad_json"}));
  cmd->add_option("--alphabet", f.alphabet, "Punctuation alphabet (UTF-8 marks)");
  cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "Output directory (must be empty or absent)");
}

void AddTriggerFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--trigger", f.trigger, "Trigger marks, or auto");
  cmd->add_option("--trigger-length", f.trigger_length, "Trigger length, or auto");
}

void AddPoisonFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--target", f.target, "Target label");
  cmd->add_option("--strategy", f.strategy, "Placement strategy")
      ->check(CLI::IsMember({"best", "best_score", "first"}));
  cmd->add_option("--scorer", f.scorer, "Masked scorer")
      ->check(CLI::IsMember({"ngram", "bridge"}));
  cmd->add_option("--scorer-command", f.scorer_command, "Command of a punc-scorer/1 process");
  cmd->add_option("--ngram-order", f.ngram_order, "Order of the n-gram scorer");
  cmd->add_option("--ngram-k", f.ngram_k, "Add-k smoothing of the n-gram scorer");
}

int ExitCodeFor(ErrorCode code) {
  return code == ErrorCode::kInvalidArgument ? kExitValidationError : kExitRuntimeError;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Punctuation-trigger backdoor toolkit", "punc_attack"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* stats = app.add_subcommand("stats", "Corpus punctuation statistics");
  AddCommonFlags(stats, f);

  CLI::App* select = app.add_subcommand("select-trigger", "Choose a trigger combination");
  AddCommonFlags(select, f);
  AddTriggerFlags(select, f);

  CLI::App* poison_cls = app.add_subcommand("poison-cls", "Poison a classification dataset");
  AddCommonFlags(poison_cls, f);
  AddTriggerFlags(poison_cls, f);
  AddPoisonFlags(poison_cls, f);
  poison_cls->add_option("--rate", f.rate, "Poisoning rate in (0, 1]");
  poison_cls->add_flag("--exclude-target", f.exclude_target,
                       "Drop target-class documents from the poisoned test set");

  CLI::App* sweep = app.add_subcommand("sweep", "Poison at several rates");
  AddCommonFlags(sweep, f);
  AddTriggerFlags(sweep, f);
  AddPoisonFlags(sweep, f);
  sweep->add_option("--rates", f.rates, "Comma-separated rates")->delimiter(',');

  CLI::App* poison_qa = app.add_subcommand("poison-qa", "Poison a SQuAD v1.1 dataset");
  AddCommonFlags(poison_qa, f);
  poison_qa->add_option("--count", f.count, "Contexts to poison");
  poison_qa->add_option("--pair", f.pair, "Wrapping pair of two marks");
  poison_qa->add_option("--tagger", f.tagger, "POS tagger")
      ->check(CLI::IsMember({"rule", "bridge"}));
  poison_qa->add_option("--tagger-command", f.tagger_command,
                        "Command of a punc-tagger/1 process");

  CLI::App* eval = app.add_subcommand("eval", "Score predictions");
  AddCommonFlags(eval, f);
  eval->add_option("--task", f.task, "cls or qa")->check(CLI::IsMember({"cls", "qa"}));
  eval->add_option("--target", f.target, "Target label (cls)");
  eval->add_option("--predictions", f.predictions, "Predictions on clean data");
  eval->add_option("--poisoned-predictions", f.poisoned_predictions,
                   "Predictions on poisoned data");
  eval->add_option("--poisoned", f.poisoned,
                   "Poisoned test JSONL (cls) or QA provenance JSONL (qa)");
  eval->add_option("--ngram-order", f.ngram_order, "Order of the perplexity proxy model");
  eval->add_option("--ngram-k", f.ngram_k, "Add-k smoothing of the perplexity proxy model");

  CLI::App* report = app.add_subcommand("report", "Render a metrics report as a table");
  report->add_option("--metrics", f.metrics, "metrics.json written by eval")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidationError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    const RunConfig config = ResolveConfig(f);
    ValidateRunConfig(config, name);
    if (chosen == stats) {
      CmdStats(config, out);
    } else if (chosen == select) {
      CmdSelectTrigger(config, out);
    } else if (chosen == poison_cls) {
      CmdPoisonCls(config, out);
    } else if (chosen == sweep) {
      CmdSweep(config, out);
    } else if (chosen == poison_qa) {
      CmdPoisonQA(config, out);
    } else if (chosen == eval) {
      CmdEval(config, out);
    } else {
      CmdReport(config, out);
    }
  } catch (const Error& e) {
    err << "punc_attack " << name << ": " << ErrorCodeName(e.code()) << ": " << e.what()
        << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "punc_attack " << name << ": " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}

}  // namespace punc
