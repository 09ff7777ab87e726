// tools/rnntx_main.cc

// Copyright 2026  The rnntx authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: corpus generation, target corruption, toy-model
// training, evaluation, loss verification, lattice export and report tables.
// Every command writes a manifest next to its outputs; `replay` re-runs a
// manifest and reproduces the outputs byte-identically.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rnntx/corpus.h"
#include "rnntx/corruption.h"
#include "rnntx/error.h"
#include "rnntx/lattice.h"
#include "rnntx/metrics.h"
#include "rnntx/model.h"
#include "rnntx/selfcheck.h"
#include "rnntx/trainer.h"
#include "rnntx/version.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsageError = 2;

// Shortest round-trip decimal form, so manifests replay bit-exactly.
std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string format_fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

// Canonical argv for the manifest: every flag explicit and resolved.
class ArgList {
 public:
  explicit ArgList(std::string command) { args_.push_back(std::move(command)); }

  ArgList& flag(const std::string& name, const std::string& value) {
    args_.push_back(name);
    args_.push_back(value);
    return *this;
  }
  ArgList& flag(const std::string& name, double value) {
    return flag(name, format_double(value));
  }
  ArgList& flag(const std::string& name, std::int64_t value) {
    return flag(name, std::to_string(value));
  }
  ArgList& flag(const std::string& name, std::uint64_t value) {
    return flag(name, std::to_string(value));
  }
  ArgList& flag(const std::string& name, std::int32_t value) {
    return flag(name, std::to_string(value));
  }
  ArgList& bare(const std::string& name) {
    args_.push_back(name);
    return *this;
  }

  const std::vector<std::string>& args() const { return args_; }

 private:
  std::vector<std::string> args_;
};

void write_manifest(const fs::path& path, const ArgList& argv,
                    const std::vector<std::string>& outputs) {
  ordered_json manifest;
  manifest["tool"] = "rnntx";
  manifest["version"] = rnntx::kVersion;
  manifest["command"] = argv.args().front();
  manifest["argv"] = argv.args();
  manifest["outputs"] = outputs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rnntx::IoError("cannot write manifest: " + path.string());
  out << manifest.dump(2) << "\n";
}

int dispatch(const std::vector<std::string>& args);

// ----------------------------------------------------------------------
// gen

struct GenArgs {
  std::int32_t vocab = 20;
  std::int64_t utterances = 2000;
  std::int32_t min_words = 5;
  std::int32_t max_words = 12;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out;
};

int run_gen(const GenArgs& a) {
  rnntx::Corpus corpus = rnntx::generate_corpus(a.vocab, a.utterances,
                                                a.min_words, a.max_words,
                                                a.seed, a.jobs);
  rnntx::save_corpus(corpus, a.out);
  ArgList argv("gen");
  argv.flag("--vocab", a.vocab)
      .flag("--utterances", a.utterances)
      .flag("--min-words", a.min_words)
      .flag("--max-words", a.max_words)
      .flag("--seed", a.seed)
      .flag("--jobs", std::int64_t{a.jobs})
      .flag("--out", a.out);
  write_manifest(a.out + ".manifest.json", argv, {a.out});
  return kExitOk;
}

// ----------------------------------------------------------------------
// corrupt

struct CorruptArgs {
  std::string in;
  std::string out;
  std::string kind = "del";
  double p = 0.2;
  double utt_frac = 0.5;
  double per_type_p = 0.15;
  std::uint64_t seed = 1;
  int jobs = 1;
};

int run_corrupt(const CorruptArgs& a) {
  rnntx::Corpus corpus = rnntx::load_corpus(a.in);
  rnntx::CorruptionSpec spec;
  spec.kind = rnntx::corruption_kind_from_string(a.kind);
  spec.word_probability = a.p;
  spec.utterance_fraction = a.utt_frac;
  spec.per_type_p = a.per_type_p;
  spec.seed = a.seed;
  rnntx::Corpus corrupted = rnntx::corrupt(corpus, spec, nullptr, a.jobs);
  rnntx::save_corpus(corrupted, a.out);

  ArgList argv("corrupt");
  argv.flag("--in", a.in)
      .flag("--out", a.out)
      .flag("--kind", a.kind)
      .flag("--p", a.p)
      .flag("--utt-frac", a.utt_frac)
      .flag("--per-type-p", a.per_type_p)
      .flag("--seed", a.seed)
      .flag("--jobs", std::int64_t{a.jobs});
  write_manifest(a.out + ".manifest.json", argv, {a.out});
  return kExitOk;
}

// ----------------------------------------------------------------------
// train

struct TrainArgs {
  std::string corpus;
  std::string test_corpus;
  std::string loss = "rnnt";
  double skip_frame_weight = 0.0;
  double skip_token_penalty = -20.0;
  std::string skip_token_mode = "sumexcl";
  double decay = 0.9;
  double max_weight = -6.0;
  std::int32_t start_epoch = 3;
  std::int32_t epochs = 50;
  double lr = 0.05;
  double momentum = 0.9;
  std::int32_t batch_size = 8;
  std::int32_t hidden_dim = 32;
  std::int32_t frames_per_word = 4;
  std::int32_t feature_dim = 16;
  double noise_std = 0.1;
  std::int32_t eval_every = 1;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir;
};

void write_metrics_csv(const fs::path& path,
                       const std::vector<rnntx::EpochStats>& history) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rnntx::IoError("cannot write metrics: " + path.string());
  out << "epoch,train_loss,dev_wer,sub,ins,del,current_penalty\n";
  for (const rnntx::EpochStats& row : history) {
    out << row.epoch << "," << format_fixed(row.train_loss) << ",";
    if (row.evaluated) {
      out << format_fixed(row.dev_wer) << "," << row.dev_counts.sub << ","
          << row.dev_counts.ins << "," << row.dev_counts.del;
    } else {
      out << ",,,";
    }
    out << "," << format_double(row.current_penalty) << "\n";
  }
}

int run_train(const TrainArgs& a) {
  rnntx::Corpus corpus = rnntx::load_corpus(a.corpus);
  if (corpus.empty()) {
    throw rnntx::EmptyReferenceError("train: corpus is empty: " + a.corpus);
  }

  rnntx::SynthesisSpec spec = rnntx::make_synthesis_spec(corpus, a.seed);
  spec.frames_per_word = a.frames_per_word;
  spec.feature_dim = a.feature_dim;
  spec.noise_std = a.noise_std;

  rnntx::TrainConfig config;
  config.epochs = a.epochs;
  config.learning_rate = a.lr;
  config.momentum = a.momentum;
  config.batch_size = a.batch_size;
  config.hidden_dim = a.hidden_dim;
  config.eval_every = a.eval_every;
  config.seed = a.seed;
  config.num_threads = a.jobs;
  config.loss.kind = rnntx::loss_kind_from_string(a.loss);
  config.loss.skip_frame_weight = a.skip_frame_weight;
  config.loss.skip_token_penalty = a.skip_token_penalty;
  config.loss.skip_token_mode =
      rnntx::skip_token_mode_from_string(a.skip_token_mode);
  config.schedule.initial_weight = a.skip_token_penalty;
  config.schedule.decay = a.decay;
  config.schedule.max_weight = a.max_weight;
  config.schedule.start_epoch = a.start_epoch;

  fs::create_directories(a.out_dir);
  rnntx::TrainResult result = rnntx::train(corpus, spec, config);

  const fs::path out_dir(a.out_dir);
  write_metrics_csv(out_dir / "metrics.csv", result.history);
  // The checkpoint is the best-on-dev model, not the final epoch.
  rnntx::save_checkpoint((out_dir / "checkpoint.bin").string(),
                         result.best_params, result.synthesis);

  ordered_json summary;
  summary["dev_wer"] = result.best_dev_wer;
  summary["best_epoch"] = result.best_epoch;
  for (auto it = result.history.rbegin(); it != result.history.rend(); ++it) {
    if (it->evaluated) {
      summary["final_dev_wer"] = it->dev_wer;
      summary["dev_sub"] = it->dev_counts.sub;
      summary["dev_ins"] = it->dev_counts.ins;
      summary["dev_del"] = it->dev_counts.del;
      summary["dev_ref_len"] = it->dev_counts.correct_ref_len;
      break;
    }
  }
  summary["final_train_loss"] = result.history.back().train_loss;
  summary["epochs"] = result.history.back().epoch;
  if (!a.test_corpus.empty()) {
    rnntx::Corpus test = rnntx::load_corpus(a.test_corpus);
    rnntx::FrameSynthesizer synth(result.synthesis);
    rnntx::EvalResult eval =
        rnntx::evaluate_corpus(test, result.best_params, synth);
    summary["test_wer"] = eval.wer;
  }
  {
    std::ofstream out(out_dir / "summary.json", std::ios::binary);
    out << summary.dump(2) << "\n";
  }

  ArgList argv("train");
  argv.flag("--corpus", a.corpus);
  if (!a.test_corpus.empty()) argv.flag("--test-corpus", a.test_corpus);
  argv.flag("--loss", a.loss)
      .flag("--skip-frame-weight", a.skip_frame_weight)
      .flag("--skip-token-penalty", a.skip_token_penalty)
      .flag("--skip-token-mode", a.skip_token_mode)
      .flag("--decay", a.decay)
      .flag("--max-weight", a.max_weight)
      .flag("--start-epoch", a.start_epoch)
      .flag("--epochs", a.epochs)
      .flag("--lr", a.lr)
      .flag("--momentum", a.momentum)
      .flag("--batch-size", a.batch_size)
      .flag("--hidden-dim", a.hidden_dim)
      .flag("--frames-per-word", a.frames_per_word)
      .flag("--feature-dim", a.feature_dim)
      .flag("--noise-std", a.noise_std)
      .flag("--eval-every", a.eval_every)
      .flag("--seed", a.seed)
      .flag("--jobs", std::int64_t{a.jobs})
      .flag("--out-dir", a.out_dir);
  write_manifest(out_dir / "manifest.json", argv,
                 {(out_dir / "metrics.csv").string(),
                  (out_dir / "checkpoint.bin").string(),
                  (out_dir / "summary.json").string()});

  if (summary.contains("dev_wer")) {
    std::cout << "best dev WER "
              << format_fixed(summary["dev_wer"].get<double>()) << " at epoch "
              << result.best_epoch << " of "
              << result.history.back().epoch << "\n";
  }
  return kExitOk;
}

// ----------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string corpus;
  std::string checkpoint;
};

int run_eval(const EvalArgs& a) {
  rnntx::Corpus corpus = rnntx::load_corpus(a.corpus);
  if (corpus.empty()) {
    throw rnntx::EmptyReferenceError("eval: corpus is empty: " + a.corpus);
  }
  rnntx::ToyCheckpoint ckpt = rnntx::load_checkpoint(a.checkpoint);
  rnntx::FrameSynthesizer synth(ckpt.spec);
  rnntx::EvalResult eval = rnntx::evaluate_corpus(corpus, ckpt.params, synth);
  std::cout << "WER " << format_fixed(eval.wer) << " (sub " << eval.counts.sub
            << ", ins " << eval.counts.ins << ", del " << eval.counts.del
            << ", ref " << eval.counts.correct_ref_len << ", cap_hits "
            << eval.cap_hits << ")\n";
  return kExitOk;
}

// ----------------------------------------------------------------------
// check-loss

struct CheckArgs {
  std::int64_t trials = 1000;
  std::int32_t max_t = 4;
  std::int32_t max_u = 3;
  std::int32_t max_v = 3;
  std::uint64_t seed = 1;
  bool inject_gradient_fault = false;
  std::int64_t grad_trials = 200;
  std::int64_t degeneration_trials = 100;
};

int run_check_loss(const CheckArgs& a) {
  rnntx::CheckOptions options;
  options.max_frames = a.max_t;
  options.max_units = a.max_u;
  options.max_vocab = a.max_v;
  options.seed = a.seed;
  options.inject_gradient_fault = a.inject_gradient_fault;

  bool ok = true;
  options.trials = a.trials;
  rnntx::CheckSummary oracle = rnntx::check_loss_oracle(options);
  std::cout << "oracle equivalence: " << oracle.trials << " trials, "
            << oracle.failures << " failures, max |dp - oracle| = "
            << format_double(oracle.max_deviation) << "\n";
  ok = ok && oracle.ok();

  options.trials = a.grad_trials;
  rnntx::CheckSummary grads = rnntx::check_loss_gradients(options);
  std::cout << "gradient check: " << grads.trials << " trials, "
            << grads.failures << " failures, max rel err = "
            << format_double(grads.max_deviation) << "\n";
  ok = ok && grads.ok();

  options.trials = a.degeneration_trials;
  rnntx::CheckSummary degen = rnntx::check_degeneration(options);
  std::cout << "degeneration identities: " << degen.trials << " trials, "
            << degen.failures << " failures, max |delta| = "
            << format_double(degen.max_deviation) << "\n";
  ok = ok && degen.ok();

  std::cout << (ok ? "all checks passed" : "CHECKS FAILED") << "\n";
  return ok ? kExitOk : kExitVerificationFailure;
}

// ----------------------------------------------------------------------
// export-dot

struct ExportDotArgs {
  std::string loss = "rnnt";
  std::int32_t t = 3;
  std::int32_t u = 2;
  std::int32_t vocab = 3;
  std::string repr = "grid";
  std::string out;
};

int run_export_dot(const ExportDotArgs& a) {
  rnntx::LossKind kind = rnntx::loss_kind_from_string(a.loss);
  if (a.t < 1 || a.u < 0 || a.vocab < 1) {
    throw rnntx::Error("export-dot: need --t >= 1, --u >= 0, --vocab >= 1");
  }
  rnntx::TargetSequence target;
  for (std::int32_t u = 0; u < a.u; ++u) {
    target.units.push_back(u % a.vocab);
  }

  rnntx::Wfsa graph = [&] {
    if (a.repr == "grid") {
      return rnntx::build_grid(target, a.t, a.vocab, kind);
    }
    if (a.repr == "unit") {
      return rnntx::build_unit_schema(target, a.vocab, kind);
    }
    if (a.repr == "temporal") {
      return rnntx::build_temporal_schema(a.t, a.vocab, kind);
    }
    if (a.repr == "composed") {
      return rnntx::connect(
          rnntx::compose(rnntx::build_unit_schema(target, a.vocab, kind),
                         rnntx::build_temporal_schema(a.t, a.vocab, kind)));
    }
    throw rnntx::Error("export-dot: unknown --repr: " + a.repr);
  }();

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw rnntx::IoError("cannot write DOT file: " + a.out);
  out << rnntx::to_dot(graph, a.vocab);
  out.close();

  ArgList argv("export-dot");
  argv.flag("--loss", a.loss)
      .flag("--t", a.t)
      .flag("--u", a.u)
      .flag("--vocab", a.vocab)
      .flag("--repr", a.repr)
      .flag("--out", a.out);
  write_manifest(a.out + ".manifest.json", argv, {a.out});
  return kExitOk;
}

// ----------------------------------------------------------------------
// report

struct ReportArgs {
  std::string runs;
  std::string out;  // empty = stdout
  std::string format = "csv";
};

struct RunRecord {
  std::string dir;
  std::string loss;
  std::string corruption_type = "none";
  double corruption_pct = 0.0;
  double dev_wer = 0.0;
  bool has_test_wer = false;
  double test_wer = 0.0;
};

std::string find_arg(const json& manifest, const std::string& flag) {
  const auto& argv = manifest.at("argv");
  for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
    if (argv[i] == flag) return argv[i + 1].get<std::string>();
  }
  return "";
}

int run_report(const ReportArgs& a) {
  std::vector<RunRecord> runs;
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(a.runs)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());

  for (const fs::path& dir : dirs) {
    json manifest;
    {
      std::ifstream in(dir / "manifest.json");
      in >> manifest;
    }
    if (manifest.value("command", "") != "train") continue;
    RunRecord rec;
    rec.dir = dir.filename().string();
    rec.loss = find_arg(manifest, "--loss");

    // Corruption provenance from the corpus file's own manifest.
    std::string corpus_path = find_arg(manifest, "--corpus");
    fs::path corpus_manifest = corpus_path + ".manifest.json";
    if (fs::exists(corpus_manifest)) {
      json cm;
      std::ifstream in(corpus_manifest);
      in >> cm;
      if (cm.value("command", "") == "corrupt") {
        rec.corruption_type = find_arg(cm, "--kind");
        const std::string pct_flag =
            rec.corruption_type == "mixed" ? "--utt-frac" : "--p";
        rec.corruption_pct = std::stod(find_arg(cm, pct_flag));
      }
    }

    fs::path summary_path = dir / "summary.json";
    if (!fs::exists(summary_path)) {
      std::cerr << "warning: " << dir << " has no summary.json; skipped\n";
      continue;
    }
    json summary;
    {
      std::ifstream in(summary_path);
      in >> summary;
    }
    if (!summary.contains("dev_wer")) {
      std::cerr << "warning: " << dir << " has no dev_wer; skipped\n";
      continue;
    }
    rec.dev_wer = summary["dev_wer"].get<double>();
    if (summary.contains("test_wer")) {
      rec.has_test_wer = true;
      rec.test_wer = summary["test_wer"].get<double>();
    }
    runs.push_back(std::move(rec));
  }

  // Baselines: the clean rnnt run anchors WERD; the rnnt run on the same
  // corruption anchors WERDR.
  const RunRecord* clean_baseline = nullptr;
  for (const RunRecord& r : runs) {
    if (r.loss == "rnnt" && r.corruption_type == "none") {
      clean_baseline = &r;
      break;
    }
  }
  if (clean_baseline == nullptr) {
    std::cerr << "warning: no clean rnnt baseline run; WERD/WERDR left "
                 "empty\n";
  }

  auto rnnt_on = [&](const std::string& type, double pct) -> const RunRecord* {
    for (const RunRecord& r : runs) {
      if (r.loss == "rnnt" && r.corruption_type == type &&
          r.corruption_pct == pct) {
        return &r;
      }
    }
    return nullptr;
  };

  std::string table;
  const bool markdown = a.format == "md";
  if (markdown) {
    table +=
        "| loss | corruption_type | corruption_pct | dev_wer | test_wer | "
        "werd | werdr |\n|---|---|---|---|---|---|---|\n";
  } else {
    table += "loss,corruption_type,corruption_pct,dev_wer,test_wer,werd,"
             "werdr\n";
  }
  for (const RunRecord& r : runs) {
    std::string werd_cell, werdr_cell;
    if (clean_baseline != nullptr && r.corruption_type != "none") {
      double run_werd = rnntx::werd(r.dev_wer, clean_baseline->dev_wer);
      werd_cell = format_fixed(run_werd, 4);
      if (r.loss != "rnnt") {
        const RunRecord* base = rnnt_on(r.corruption_type, r.corruption_pct);
        if (base == nullptr) {
          std::cerr << "warning: no rnnt baseline for corruption "
                    << r.corruption_type << " " << r.corruption_pct
                    << "; WERDR left empty\n";
        } else {
          double base_werd =
              rnntx::werd(base->dev_wer, clean_baseline->dev_wer);
          if (base_werd != 0.0) {
            werdr_cell = format_fixed(rnntx::werdr(base_werd, run_werd), 4);
          }
        }
      }
    }
    std::string test_cell = r.has_test_wer ? format_fixed(r.test_wer, 4) : "";
    if (markdown) {
      table += "| " + r.loss + " | " + r.corruption_type + " | " +
               format_double(r.corruption_pct) + " | " +
               format_fixed(r.dev_wer, 4) + " | " + test_cell + " | " +
               werd_cell + " | " + werdr_cell + " |\n";
    } else {
      table += r.loss + "," + r.corruption_type + "," +
               format_double(r.corruption_pct) + "," +
               format_fixed(r.dev_wer, 4) + "," + test_cell + "," + werd_cell +
               "," + werdr_cell + "\n";
    }
  }

  if (a.out.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw rnntx::IoError("cannot write report: " + a.out);
    out << table;
    out.close();
    ArgList argv("report");
    argv.flag("--runs", a.runs).flag("--out", a.out).flag("--format",
                                                          a.format);
    write_manifest(a.out + ".manifest.json", argv, {a.out});
  }
  return kExitOk;
}

// ----------------------------------------------------------------------
// replay

int run_replay(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw rnntx::IoError("cannot open manifest: " + manifest_path);
  json manifest;
  in >> manifest;
  std::vector<std::string> argv =
      manifest.at("argv").get<std::vector<std::string>>();
  if (argv.empty() || argv.front() == "replay") {
    throw rnntx::Error("replay: manifest does not hold a replayable command");
  }
  return dispatch(argv);
}

// ----------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"WFST transducer losses for noisy-target training"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic corpus");
  gen_cmd->add_option("--vocab", gen.vocab, "vocabulary size");
  gen_cmd->add_option("--utterances", gen.utterances, "utterance count");
  gen_cmd->add_option("--min-words", gen.min_words, "minimum words");
  gen_cmd->add_option("--max-words", gen.max_words, "maximum words");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--jobs", gen.jobs,
                      "worker threads (never changes results)");
  gen_cmd->add_option("--out", gen.out, "output corpus (JSON lines)")
      ->required();

  CorruptArgs corrupt;
  CLI::App* corrupt_cmd =
      app.add_subcommand("corrupt", "corrupt corpus targets");
  corrupt_cmd->add_option("--in", corrupt.in, "input corpus")->required();
  corrupt_cmd->add_option("--out", corrupt.out, "output corpus")->required();
  corrupt_cmd
      ->add_option("--kind", corrupt.kind, "del | sub | ins | mixed")
      ->check(CLI::IsMember({"del", "sub", "ins", "mixed"}));
  corrupt_cmd->add_option("--p", corrupt.p, "per-word mutation probability");
  corrupt_cmd->add_option("--utt-frac", corrupt.utt_frac,
                          "mixed: fraction of utterances corrupted");
  corrupt_cmd->add_option("--per-type-p", corrupt.per_type_p,
                          "mixed: per-stage word probability");
  corrupt_cmd->add_option("--seed", corrupt.seed, "random seed");
  corrupt_cmd->add_option("--jobs", corrupt.jobs,
                          "worker threads (never changes results)");

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "train the toy model");
  train_cmd->add_option("--corpus", train.corpus, "training corpus")
      ->required();
  train_cmd->add_option("--test-corpus", train.test_corpus,
                        "optional corpus for a final test evaluation");
  train_cmd->add_option("--loss", train.loss, "rnnt | star | bypass | trt")
      ->check(CLI::IsMember({"rnnt", "star", "bypass", "trt"}));
  train_cmd->add_option("--skip-frame-weight", train.skip_frame_weight,
                        "constant skip-frame arc weight (star/trt)");
  train_cmd->add_option("--skip-token-penalty", train.skip_token_penalty,
                        "initial skip-token penalty (bypass/trt)");
  train_cmd
      ->add_option("--skip-token-mode", train.skip_token_mode,
                   "constant | mean | max | maxexcl | sumexcl")
      ->check(CLI::IsMember({"constant", "mean", "max", "maxexcl", "sumexcl"}));
  train_cmd->add_option("--decay", train.decay, "penalty decay per epoch");
  train_cmd->add_option("--max-weight", train.max_weight,
                        "penalty cap (the schedule's max weight)");
  train_cmd->add_option("--start-epoch", train.start_epoch,
                        "first epoch after which the penalty decays");
  train_cmd->add_option("--epochs", train.epochs, "training epochs");
  train_cmd->add_option("--lr", train.lr, "learning rate");
  train_cmd->add_option("--momentum", train.momentum, "SGD momentum");
  train_cmd->add_option("--batch-size", train.batch_size, "batch size");
  train_cmd->add_option("--hidden-dim", train.hidden_dim,
                        "model hidden dimension");
  train_cmd->add_option("--frames-per-word", train.frames_per_word,
                        "synthesized frames per word");
  train_cmd->add_option("--feature-dim", train.feature_dim,
                        "synthesized feature dimension");
  train_cmd->add_option("--noise-std", train.noise_std,
                        "synthesis noise std");
  train_cmd->add_option("--eval-every", train.eval_every,
                        "dev evaluation cadence (epochs)");
  train_cmd->add_option("--seed", train.seed, "random seed");
  train_cmd->add_option("--jobs", train.jobs,
                        "worker threads (never changes results)");
  train_cmd->add_option("--out-dir", train.out_dir, "run output directory")
      ->required();

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "greedy-decode a corpus with a checkpoint");
  eval_cmd->add_option("--corpus", eval.corpus, "corpus to decode")
      ->required();
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "model checkpoint")
      ->required();

  CheckArgs check;
  CLI::App* check_cmd = app.add_subcommand(
      "check-loss", "run oracle, gradient and degeneration suites");
  check_cmd->add_option("--trials", check.trials, "oracle trials");
  check_cmd->add_option("--grad-trials", check.grad_trials,
                        "gradient-check trials");
  check_cmd->add_option("--degeneration-trials", check.degeneration_trials,
                        "degeneration trials");
  check_cmd->add_option("--max-t", check.max_t, "max frames");
  check_cmd->add_option("--max-u", check.max_u, "max target units");
  check_cmd->add_option("--max-v", check.max_v, "max vocabulary size");
  check_cmd->add_option("--seed", check.seed, "random seed");
  check_cmd
      ->add_flag("--inject-gradient-fault", check.inject_gradient_fault,
                 "test hook: corrupt one gradient entry, expect failure")
      ->group("");  // hidden

  ExportDotArgs export_dot;
  CLI::App* export_cmd =
      app.add_subcommand("export-dot", "write a lattice as Graphviz DOT");
  export_cmd->add_option("--loss", export_dot.loss,
                         "rnnt | star | bypass | trt")
      ->check(CLI::IsMember({"rnnt", "star", "bypass", "trt"}));
  export_cmd->add_option("--t", export_dot.t, "frame count");
  export_cmd->add_option("--u", export_dot.u, "target length");
  export_cmd->add_option("--vocab", export_dot.vocab, "vocabulary size");
  export_cmd
      ->add_option("--repr", export_dot.repr,
                   "grid | unit | temporal | composed")
      ->check(CLI::IsMember({"grid", "unit", "temporal", "composed"}));
  export_cmd->add_option("--out", export_dot.out, "output DOT file")
      ->required();

  ReportArgs report;
  CLI::App* report_cmd =
      app.add_subcommand("report", "aggregate training runs into a table");
  report_cmd->add_option("--runs", report.runs, "directory of run dirs")
      ->required();
  report_cmd->add_option("--out", report.out, "output file (default stdout)");
  report_cmd->add_option("--format", report.format, "csv | md")
      ->check(CLI::IsMember({"csv", "md"}));

  std::string replay_manifest;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "re-run a recorded manifest");
  replay_cmd->add_option("--manifest", replay_manifest, "manifest path")
      ->required();

  try {
    // CLI11 wants (argc, argv) in reversed order for its vector overload.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  if (gen_cmd->parsed()) return run_gen(gen);
  if (corrupt_cmd->parsed()) return run_corrupt(corrupt);
  if (train_cmd->parsed()) return run_train(train);
  if (eval_cmd->parsed()) return run_eval(eval);
  if (check_cmd->parsed()) return run_check_loss(check);
  if (export_cmd->parsed()) return run_export_dot(export_dot);
  if (report_cmd->parsed()) return run_report(report);
  if (replay_cmd->parsed()) return run_replay(replay_manifest);
  return kExitUsageError;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return dispatch(args);
  } catch (const rnntx::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const rnntx::EmptyReferenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const rnntx::InvalidTargetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
}
