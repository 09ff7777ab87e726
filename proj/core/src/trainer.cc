// core/src/trainer.cc

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

#include "rnntx/trainer.h"

#include <cmath>
#include <limits>

#include "rnntx/error.h"
#include "rnntx/parallel.h"
#include "rnntx/rng.h"

namespace rnntx {

void split_dev(const Corpus& corpus, std::vector<std::size_t>& train_indices,
               std::vector<std::size_t>& dev_indices) {
  train_indices.clear();
  dev_indices.clear();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (i % 10 == 0 ? dev_indices : train_indices).push_back(i);
  }
}

EvalResult evaluate_corpus(const Corpus& corpus, const ToyModelParams& params,
                           const FrameSynthesizer& synth,
                           const DecoderBudget& budget) {
  EvalResult result;
  for (const Utterance& utt : corpus) {
    RowMatrix frames = synth.frames(utt);
    ToyFrameScorer scorer(params, frames);
    DecodeStats stats;
    std::vector<std::int32_t> hyp_ids = greedy_decode(scorer, budget, &stats);
    result.cap_hits += stats.cap_hits;

    std::vector<std::string> hyp_words;
    hyp_words.reserve(hyp_ids.size());
    for (std::int32_t id : hyp_ids) hyp_words.push_back(synth.spec().vocab[id]);
    result.counts += align(utt.true_words, hyp_words);
  }
  result.wer = wer(result.counts);
  return result;
}

namespace {

struct ItemResult {
  double loss = 0.0;
  ToyModelGrads grads;
};

ItemResult score_utterance(const Utterance& utt, const ToyModelParams& params,
                           const FrameSynthesizer& synth,
                           const LossConfig& loss_config, double penalty) {
  TargetSequence target{synth.word_ids(utt.target_words)};
  RowMatrix frames = synth.frames(utt);
  ForwardCache cache;
  JointLogProbs joint = forward_joint(params, frames, target, &cache);
  LossResult loss = loss_and_grad(joint, target, loss_config, penalty);

  ItemResult item;
  item.loss = loss.loss;
  item.grads = zero_grads(params);
  backward_params(params, frames, target, joint, cache, loss.grad, item.grads);
  return item;
}

void axpy(ToyModelParams& y, double a, const ToyModelParams& x) {
  y.encoder_weight += a * x.encoder_weight;
  y.encoder_bias += a * x.encoder_bias;
  y.embeddings += a * x.embeddings;
  y.joint_weight += a * x.joint_weight;
  y.joint_bias += a * x.joint_bias;
}

void scale(ToyModelParams& y, double a) {
  y.encoder_weight *= a;
  y.encoder_bias *= a;
  y.embeddings *= a;
  y.joint_weight *= a;
  y.joint_bias *= a;
}

}  // namespace

TrainResult train(const Corpus& corpus, const SynthesisSpec& spec,
                  const TrainConfig& config) {
  if (corpus.empty()) throw Error("train: empty corpus");
  if (config.epochs < 1) throw Error("train: epochs must be >= 1");
  if (config.batch_size < 1) throw Error("train: batch_size must be >= 1");

  FrameSynthesizer synth(spec);
  const std::int32_t vocab_size =
      static_cast<std::int32_t>(spec.vocab.size());

  std::vector<std::size_t> train_idx, dev_idx;
  split_dev(corpus, train_idx, dev_idx);
  if (train_idx.empty()) train_idx = dev_idx;  // tiny corpora: train on all

  TrainResult result;
  result.synthesis = spec;
  result.params = init_params(vocab_size, spec.feature_dim, config.hidden_dim,
                              config.seed);
  ToyModelParams velocity = zero_grads(result.params);

  double penalty = config.schedule.initial_weight;
  std::vector<std::size_t> order = train_idx;

  for (std::int32_t epoch = 1; epoch <= config.epochs; ++epoch) {
    RandomStream shuffle_stream =
        RandomStream::derive(config.seed, "shuffle", epoch);
    shuffle_stream.shuffle(order);

    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += config.batch_size) {
      const std::size_t end =
          std::min(order.size(), begin + config.batch_size);
      const std::size_t count = end - begin;

      std::vector<ItemResult> items(count);
      parallel_for(count, config.num_threads, [&](std::size_t i) {
        const Utterance& utt = corpus[order[begin + i]];
        try {
          items[i] = score_utterance(utt, result.params, synth, config.loss,
                                     penalty);
        } catch (const NoPathError&) {
          // A diverged model can push whole rows to log-zero; report it as
          // the divergence it is, with the utterance that triggered it.
          throw NonFiniteLossError("non-finite loss on utterance " + utt.id);
        }
      });

      // Reduce in index order so --jobs never changes the update.
      ToyModelGrads batch_grads = zero_grads(result.params);
      for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(items[i].loss)) {
          throw NonFiniteLossError("non-finite loss on utterance " +
                                   corpus[order[begin + i]].id);
        }
        epoch_loss += items[i].loss;
        axpy(batch_grads, 1.0, items[i].grads);
      }

      scale(velocity, config.momentum);
      axpy(velocity, -config.learning_rate / static_cast<double>(count),
           batch_grads);
      axpy(result.params, 1.0, velocity);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(order.size());
    stats.current_penalty = penalty;
    if (!std::isfinite(stats.train_loss)) {
      throw NonFiniteLossError("non-finite epoch loss at epoch " +
                               std::to_string(epoch));
    }
    if (epoch % config.eval_every == 0 || epoch == config.epochs) {
      Corpus dev;
      dev.reserve(dev_idx.size());
      for (std::size_t i : dev_idx) dev.push_back(corpus[i]);
      if (!dev.empty()) {
        EvalResult eval = evaluate_corpus(dev, result.params, synth);
        stats.evaluated = true;
        stats.dev_wer = eval.wer;
        stats.dev_counts = eval.counts;
        if (result.best_epoch == 0 || eval.wer < result.best_dev_wer) {
          result.best_epoch = epoch;
          result.best_dev_wer = eval.wer;
          result.best_params = result.params;
        }
      }
    }
    result.history.push_back(stats);

    penalty = schedule_step(penalty, config.schedule, epoch);
  }
  if (result.best_epoch == 0) {  // never evaluated (empty dev split)
    result.best_epoch = config.epochs;
    result.best_params = result.params;
    result.best_dev_wer = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace rnntx
