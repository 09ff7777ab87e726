// core/include/rnntx/trainer.h

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

#ifndef RNNTX_TRAINER_H_
#define RNNTX_TRAINER_H_

#include <cstdint>
#include <vector>

#include "rnntx/corpus.h"
#include "rnntx/loss.h"
#include "rnntx/metrics.h"
#include "rnntx/model.h"

namespace rnntx {

struct TrainConfig {
  std::int32_t epochs = 50;
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::int32_t batch_size = 8;
  std::int32_t hidden_dim = 32;
  LossConfig loss;
  PenaltySchedule schedule;
  std::int32_t eval_every = 1;   // dev evaluation cadence, in epochs
  std::uint64_t seed = 0;
  int num_threads = 1;           // wall time only; results are identical
};

struct EpochStats {
  std::int32_t epoch = 0;       // 1-based
  double train_loss = 0.0;      // mean per-utterance loss
  bool evaluated = false;
  double dev_wer = 0.0;
  EditCounts dev_counts;
  double current_penalty = 0.0;  // skip-token penalty in force this epoch
};

struct TrainResult {
  ToyModelParams params;       // parameters after the final epoch
  ToyModelParams best_params;  // checkpoint with the lowest dev WER
  std::int32_t best_epoch = 0;
  double best_dev_wer = 0.0;
  std::vector<EpochStats> history;
  SynthesisSpec synthesis;
};

// Every 10th utterance (indices 0, 10, 20, ...) is held out for dev.
void split_dev(const Corpus& corpus, std::vector<std::size_t>& train_indices,
               std::vector<std::size_t>& dev_indices);

// Greedy-decodes the corpus against true_words; counts are pooled.
struct EvalResult {
  EditCounts counts;
  double wer = 0.0;
  std::int64_t cap_hits = 0;
};

EvalResult evaluate_corpus(const Corpus& corpus, const ToyModelParams& params,
                           const FrameSynthesizer& synth,
                           const DecoderBudget& budget = {});

// SGD with momentum over the full-sum loss. Targets come from target_words,
// frames from true_words. The skip-token penalty starts at
// schedule.initial_weight and decays after every completed epoch. The
// checkpoint with the lowest dev WER is kept alongside the final parameters.
// Throws NonFiniteLossError (with the utterance id) if a loss diverges.
TrainResult train(const Corpus& corpus, const SynthesisSpec& spec,
                  const TrainConfig& config);

}  // namespace rnntx

#endif  // RNNTX_TRAINER_H_
