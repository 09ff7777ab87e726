// core/include/rnntx/model.h

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

#ifndef RNNTX_MODEL_H_
#define RNNTX_MODEL_H_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rnntx/corpus.h"
#include "rnntx/decoder.h"
#include "rnntx/lattice.h"
#include "rnntx/loss.h"

namespace rnntx {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Deterministic stand-in for acoustic features: every vocabulary word owns a
// fixed frames_per_word x feature_dim codebook block (drawn once from a
// seeded standard normal); an utterance is the concatenation of its words'
// blocks plus per-utterance Gaussian noise. Frames always derive from
// true_words, so the "audio" stays faithful even when targets are corrupted.
struct SynthesisSpec {
  std::vector<std::string> vocab;   // sorted; index = word id
  std::int32_t frames_per_word = 4;
  std::int32_t feature_dim = 16;
  double noise_std = 0.1;
  std::uint64_t seed = 0;
};

SynthesisSpec make_synthesis_spec(const Corpus& corpus, std::uint64_t seed);

class FrameSynthesizer {
 public:
  explicit FrameSynthesizer(SynthesisSpec spec);

  const SynthesisSpec& spec() const { return spec_; }

  // T x d feature block, T = frames_per_word * len(true_words).
  RowMatrix frames(const Utterance& utt) const;

  // Word ids for a word list; throws InvalidTargetError on unknown words.
  std::vector<UnitId> word_ids(std::span<const std::string> words) const;

 private:
  SynthesisSpec spec_;
  RowMatrix codebook_;  // (W * frames_per_word) x feature_dim
};

inline RowMatrix synthesize_frames(const Utterance& utt,
                                   const SynthesisSpec& spec) {
  return FrameSynthesizer(spec).frames(utt);
}

// Affine encoder with a rectifier, stateless one-token predictor (an
// embedding table with blank reused as start-of-sequence), and an additive
// joint projecting the rectified sum onto W+1 labels.
struct ToyModelParams {
  RowMatrix encoder_weight;  // h x d
  Eigen::VectorXd encoder_bias;
  RowMatrix embeddings;      // (W+1) x h; row W is blank/<sos>
  RowMatrix joint_weight;    // (W+1) x h
  Eigen::VectorXd joint_bias;

  std::int32_t feature_dim() const {
    return static_cast<std::int32_t>(encoder_weight.cols());
  }
  std::int32_t hidden_dim() const {
    return static_cast<std::int32_t>(encoder_weight.rows());
  }
  std::int32_t vocab_size() const {
    return static_cast<std::int32_t>(embeddings.rows()) - 1;
  }
  std::int64_t parameter_count() const;
};

using ToyModelGrads = ToyModelParams;

// Weights from a seeded normal with std 0.1, biases zero.
ToyModelParams init_params(std::int32_t vocab_size, std::int32_t feature_dim,
                           std::int32_t hidden_dim, std::uint64_t seed);

ToyModelGrads zero_grads(const ToyModelParams& params);

// Intermediate activations retained for the manual backward pass.
struct ForwardCache {
  RowMatrix encoder_out;  // T x h, post-rectifier
  RowMatrix fused;        // (T * (U+1)) x h, post-rectifier joint input
};

// Log-normalized [T][U+1][W+1] joint table for the utterance's frames and
// target prefix tokens (blank, target[0], ..., target[U-1]).
JointLogProbs forward_joint(const ToyModelParams& params,
                            const RowMatrix& frames,
                            const TargetSequence& target,
                            ForwardCache* cache = nullptr);

// Manual chain rule from d(loss)/d(joint log-probs) down to every parameter.
// The rectifier subgradient at zero is zero. Gradients accumulate into
// `grads`.
void backward_params(const ToyModelParams& params, const RowMatrix& frames,
                     const TargetSequence& target, const JointLogProbs& joint,
                     const ForwardCache& cache, const JointLogProbs& joint_grad,
                     ToyModelGrads& grads);

// Greedy-decoding adapter: encodes the frames once, then scores
// (frame, previous token) pairs on demand.
class ToyFrameScorer final : public FrameScorer {
 public:
  ToyFrameScorer(const ToyModelParams& params, const RowMatrix& frames);

  std::int32_t num_frames() const override {
    return static_cast<std::int32_t>(encoded_.rows());
  }
  std::int32_t vocab_size() const override { return params_.vocab_size(); }
  void score(std::int32_t frame, std::int32_t prev_token,
             std::span<double> out) const override;

 private:
  const ToyModelParams& params_;
  RowMatrix encoded_;  // T x h
};

// Checkpoints: a one-line JSON header (shapes plus the synthesis spec) and
// the raw parameter tensors as little-endian 64-bit floats.
void save_checkpoint(const std::string& path, const ToyModelParams& params,
                     const SynthesisSpec& spec);

struct ToyCheckpoint {
  ToyModelParams params;
  SynthesisSpec spec;
};

ToyCheckpoint load_checkpoint(const std::string& path);

}  // namespace rnntx

#endif  // RNNTX_MODEL_H_
