// benchmarks/bench_loss.cc

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

#include <benchmark/benchmark.h>

#include "rnntx/lattice.h"
#include "rnntx/loss.h"
#include "rnntx/model.h"
#include "rnntx/rng.h"

namespace {

using namespace rnntx;

JointLogProbs make_joint(std::int32_t frames, std::int32_t units,
                         std::int32_t vocab) {
  JointLogProbs joint(frames, units, vocab);
  RandomStream stream(1);
  for (double& x : joint.flat()) x = stream.normal();
  joint.normalize_rows();
  return joint;
}

TargetSequence make_target(std::int32_t units, std::int32_t vocab) {
  TargetSequence target;
  RandomStream stream(2);
  for (std::int32_t u = 0; u < units; ++u) {
    target.units.push_back(static_cast<UnitId>(stream.uniform_int(vocab)));
  }
  return target;
}

void BM_BuildGrid(benchmark::State& state) {
  const std::int32_t frames = static_cast<std::int32_t>(state.range(0));
  const std::int32_t units = frames / 4;
  TargetSequence target = make_target(units, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_grid(target, frames, 20, LossKind::kTrt));
  }
}
BENCHMARK(BM_BuildGrid)->Arg(16)->Arg(32)->Arg(64);

void BM_Compose(benchmark::State& state) {
  const std::int32_t frames = static_cast<std::int32_t>(state.range(0));
  const std::int32_t units = frames / 4;
  TargetSequence target = make_target(units, 20);
  Wfsa unit = build_unit_schema(target, 20, LossKind::kTrt);
  Wfsa temporal = build_temporal_schema(frames, 20, LossKind::kTrt);
  for (auto _ : state) {
    benchmark::DoNotOptimize(connect(compose(unit, temporal)));
  }
}
BENCHMARK(BM_Compose)->Arg(16)->Arg(32);

void BM_LossAndGrad(benchmark::State& state) {
  const std::int32_t frames = static_cast<std::int32_t>(state.range(0));
  const std::int32_t units = frames / 4;
  JointLogProbs joint = make_joint(frames, units, 20);
  TargetSequence target = make_target(units, 20);
  LossConfig config;
  config.kind = LossKind::kTrt;
  config.skip_frame_weight = -1.0;
  config.skip_token_penalty = -8.0;
  config.skip_token_mode = SkipTokenMode::kSumExcl;
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_grad(joint, target, config));
  }
}
BENCHMARK(BM_LossAndGrad)->Arg(16)->Arg(32)->Arg(64);

void BM_ForwardJoint(benchmark::State& state) {
  const std::int32_t words = static_cast<std::int32_t>(state.range(0));
  SynthesisSpec spec;
  for (int w = 0; w < 20; ++w) spec.vocab.push_back("w" + std::to_string(w));
  spec.seed = 3;
  FrameSynthesizer synth(spec);
  Utterance utt;
  utt.id = "bench";
  for (std::int32_t w = 0; w < words; ++w) {
    utt.true_words.push_back(spec.vocab[w % spec.vocab.size()]);
  }
  utt.target_words = utt.true_words;
  RowMatrix frames = synth.frames(utt);
  TargetSequence target{synth.word_ids(utt.target_words)};
  ToyModelParams params = init_params(20, 16, 32, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_joint(params, frames, target));
  }
}
BENCHMARK(BM_ForwardJoint)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
