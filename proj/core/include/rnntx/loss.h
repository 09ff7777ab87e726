// core/include/rnntx/loss.h

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

#ifndef RNNTX_LOSS_H_
#define RNNTX_LOSS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rnntx/fsa.h"
#include "rnntx/lattice.h"

namespace rnntx {

// Dense [T][U+1][V+1] table of log-probabilities from the joint network;
// index V is blank. Rows over v are expected to be log-normalized.
class JointLogProbs {
 public:
  JointLogProbs() = default;
  JointLogProbs(std::int32_t num_frames, std::int32_t num_units,
                std::int32_t vocab_size, double fill = 0.0);

  std::int32_t num_frames() const { return num_frames_; }
  std::int32_t num_units() const { return num_units_; }      // U
  std::int32_t vocab_size() const { return vocab_size_; }    // V (blank = V)
  std::int32_t num_labels() const { return vocab_size_ + 1; }

  double& at(std::int32_t t, std::int32_t u, std::int32_t v) {
    return values_[index(t, u, v)];
  }
  double at(std::int32_t t, std::int32_t u, std::int32_t v) const {
    return values_[index(t, u, v)];
  }

  std::span<double> row(std::int32_t t, std::int32_t u) {
    return std::span<double>(values_.data() + index(t, u, 0), num_labels());
  }
  std::span<const double> row(std::int32_t t, std::int32_t u) const {
    return std::span<const double>(values_.data() + index(t, u, 0),
                                   num_labels());
  }

  std::span<double> flat() { return values_; }
  std::span<const double> flat() const { return values_; }

  // Rescale every row to a proper log-distribution.
  void normalize_rows();

 private:
  std::size_t index(std::int32_t t, std::int32_t u, std::int32_t v) const {
    return (static_cast<std::size_t>(t) * (num_units_ + 1) + u) *
               num_labels() +
           v;
  }

  std::int32_t num_frames_ = 0;
  std::int32_t num_units_ = 0;
  std::int32_t vocab_size_ = 0;
  std::vector<double> values_;
};

// How a skip-token arc derives its joint-dependent score component.
enum class SkipTokenMode {
  kConstant,  // penalty only
  kMean,      // arithmetic mean of non-blank log-probs
  kMax,       // max non-blank log-prob
  kMaxExcl,   // max excluding blank and the ground-truth unit
  kSumExcl,   // log of summed probability excluding blank and ground truth
};

std::string to_string(SkipTokenMode mode);
SkipTokenMode skip_token_mode_from_string(const std::string& name);

struct LossConfig {
  LossKind kind = LossKind::kRnnt;
  double skip_frame_weight = kLogZero;   // constant; star/trt only
  double skip_token_penalty = kLogZero;  // constant part; bypass/trt only
  SkipTokenMode skip_token_mode = SkipTokenMode::kConstant;
  bool check_normalized = true;  // verify joint rows sum to one (1e-3)
};

// Per-epoch skip-token penalty decay: after every completed epoch
// >= start_epoch, weight <- min(max_weight, weight * decay).
struct PenaltySchedule {
  double initial_weight = -20.0;
  double decay = 0.9;
  double max_weight = -6.0;
  std::int32_t start_epoch = 3;
};

double schedule_step(double weight, const PenaltySchedule& schedule,
                     std::int32_t completed_epoch);

struct LossResult {
  double loss = 0.0;        // -(log total path score)
  JointLogProbs grad;       // d(loss)/d(joint values)
};

// Joint-dependent component of a skip-token arc score at one (t, u) cell.
// `row` spans the V+1 log-probs; blank (index V) never participates.
// Throws DegenerateVocabularyError when the exclusion set is empty.
double mode_value(std::span<const double> row, UnitId target_unit,
                  SkipTokenMode mode);

// Assigns weights to a lattice built for (target, T): token and blank arcs
// read the joint table; skip-frame arcs get config.skip_frame_weight;
// skip-token arcs get current_penalty + mode_value at their cell.
Wfsa populate_weights(const Wfsa& lattice, const JointLogProbs& joint,
                      const TargetSequence& target, const LossConfig& config,
                      double current_penalty);

// Full-sum loss over the alignment grid plus its analytic gradient with
// respect to every joint entry. The skip-token modes chain through
// mode_value: sumexcl spreads by softmax over the exclusion set, max/maxexcl
// route to the argmax entry (lowest index on ties), mean spreads uniformly.
LossResult loss_and_grad(const JointLogProbs& joint,
                         const TargetSequence& target,
                         const LossConfig& config, double current_penalty);

// Uses config.skip_token_penalty as the current penalty.
LossResult loss_and_grad(const JointLogProbs& joint,
                         const TargetSequence& target,
                         const LossConfig& config);

struct BatchItem {
  JointLogProbs joint;     // may be padded beyond the valid region
  TargetSequence target;
  std::int32_t valid_frames = 0;  // T for this item
  std::int32_t valid_units = 0;   // U for this item
};

struct BatchLossResult {
  std::vector<LossResult> items;  // grads shaped like each item's joint
  double mean_loss = 0.0;
};

// Scores every item independently on its valid (T, U) region; gradient
// entries outside that region are zero. `num_threads` only affects wall
// time, never the results.
BatchLossResult batch_loss(std::span<const BatchItem> batch,
                           const LossConfig& config, double current_penalty,
                           int num_threads = 1);

}  // namespace rnntx

#endif  // RNNTX_LOSS_H_
