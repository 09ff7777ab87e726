// core/src/loss.cc

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

#include "rnntx/loss.h"

#include <algorithm>
#include <cmath>

#include "rnntx/error.h"
#include "rnntx/parallel.h"

namespace rnntx {

JointLogProbs::JointLogProbs(std::int32_t num_frames, std::int32_t num_units,
                             std::int32_t vocab_size, double fill)
    : num_frames_(num_frames),
      num_units_(num_units),
      vocab_size_(vocab_size),
      values_(static_cast<std::size_t>(num_frames) * (num_units + 1) *
                  (vocab_size + 1),
              fill) {}

void JointLogProbs::normalize_rows() {
  for (std::int32_t t = 0; t < num_frames_; ++t) {
    for (std::int32_t u = 0; u <= num_units_; ++u) {
      std::span<double> r = row(t, u);
      double z = log_sum(r);
      for (double& x : r) x -= z;
    }
  }
}

std::string to_string(SkipTokenMode mode) {
  switch (mode) {
    case SkipTokenMode::kConstant:
      return "constant";
    case SkipTokenMode::kMean:
      return "mean";
    case SkipTokenMode::kMax:
      return "max";
    case SkipTokenMode::kMaxExcl:
      return "maxexcl";
    case SkipTokenMode::kSumExcl:
      return "sumexcl";
  }
  throw Error("to_string: bad SkipTokenMode");
}

SkipTokenMode skip_token_mode_from_string(const std::string& name) {
  if (name == "constant") return SkipTokenMode::kConstant;
  if (name == "mean") return SkipTokenMode::kMean;
  if (name == "max") return SkipTokenMode::kMax;
  if (name == "maxexcl") return SkipTokenMode::kMaxExcl;
  if (name == "sumexcl") return SkipTokenMode::kSumExcl;
  throw Error("unknown skip-token mode: " + name);
}

double schedule_step(double weight, const PenaltySchedule& schedule,
                     std::int32_t completed_epoch) {
  if (completed_epoch < schedule.start_epoch) return weight;
  return std::min(schedule.max_weight, weight * schedule.decay);
}

double mode_value(std::span<const double> row, UnitId target_unit,
                  SkipTokenMode mode) {
  const std::int32_t vocab_size = static_cast<std::int32_t>(row.size()) - 1;
  switch (mode) {
    case SkipTokenMode::kConstant:
      return 0.0;
    case SkipTokenMode::kMean: {
      double acc = 0.0;
      for (std::int32_t v = 0; v < vocab_size; ++v) acc += row[v];
      return acc / vocab_size;
    }
    case SkipTokenMode::kMax: {
      double best = row[0];
      for (std::int32_t v = 1; v < vocab_size; ++v) {
        best = std::max(best, row[v]);
      }
      return best;
    }
    case SkipTokenMode::kMaxExcl: {
      if (vocab_size < 2) {
        throw DegenerateVocabularyError(
            "maxexcl: no labels besides blank and the target");
      }
      double best = kLogZero;
      for (std::int32_t v = 0; v < vocab_size; ++v) {
        if (v == target_unit) continue;
        best = std::max(best, row[v]);
      }
      return best;
    }
    case SkipTokenMode::kSumExcl: {
      if (vocab_size < 2) {
        throw DegenerateVocabularyError(
            "sumexcl: no labels besides blank and the target");
      }
      double acc = kLogZero;
      for (std::int32_t v = 0; v < vocab_size; ++v) {
        if (v == target_unit) continue;
        acc = log_add(acc, row[v]);
      }
      return acc;
    }
  }
  throw Error("mode_value: bad SkipTokenMode");
}

namespace {

void check_rows_normalized(const JointLogProbs& joint) {
  for (std::int32_t t = 0; t < joint.num_frames(); ++t) {
    for (std::int32_t u = 0; u <= joint.num_units(); ++u) {
      double z = log_sum(joint.row(t, u));
      if (std::abs(z) > 1e-3) {
        throw UnnormalizedRowsError(
            "joint rows are not log-normalized (logsumexp = " +
            std::to_string(z) + " at t=" + std::to_string(t) +
            ", u=" + std::to_string(u) + ")");
      }
    }
  }
}

// Routes -coeff * d(arc weight)/d(joint entries) into the gradient row for
// one skip-token arc.
void scatter_skip_token_grad(std::span<const double> row, UnitId target_unit,
                             SkipTokenMode mode, double coeff,
                             std::span<double> grad_row) {
  const std::int32_t vocab_size = static_cast<std::int32_t>(row.size()) - 1;
  switch (mode) {
    case SkipTokenMode::kConstant:
      return;
    case SkipTokenMode::kMean: {
      for (std::int32_t v = 0; v < vocab_size; ++v) {
        grad_row[v] -= coeff / vocab_size;
      }
      return;
    }
    case SkipTokenMode::kMax: {
      std::int32_t best = 0;
      for (std::int32_t v = 1; v < vocab_size; ++v) {
        if (row[v] > row[best]) best = v;
      }
      grad_row[best] -= coeff;
      return;
    }
    case SkipTokenMode::kMaxExcl: {
      std::int32_t best = -1;
      for (std::int32_t v = 0; v < vocab_size; ++v) {
        if (v == target_unit) continue;
        if (best < 0 || row[v] > row[best]) best = v;
      }
      grad_row[best] -= coeff;
      return;
    }
    case SkipTokenMode::kSumExcl: {
      double total = mode_value(row, target_unit, SkipTokenMode::kSumExcl);
      for (std::int32_t v = 0; v < vocab_size; ++v) {
        if (v == target_unit) continue;
        grad_row[v] -= coeff * std::exp(row[v] - total);
      }
      return;
    }
  }
}

}  // namespace

Wfsa populate_weights(const Wfsa& lattice, const JointLogProbs& joint,
                      const TargetSequence& target, const LossConfig& config,
                      double current_penalty) {
  const std::int32_t num_frames = joint.num_frames();
  const std::int32_t num_units = joint.num_units();
  const std::int32_t vocab_size = joint.vocab_size();
  if (target.length() != num_units) {
    throw ShapeMismatchError("populate_weights: target length " +
                             std::to_string(target.length()) +
                             " != joint U " + std::to_string(num_units));
  }
  if (config.check_normalized) check_rows_normalized(joint);

  const UnitId blank = blank_unit(vocab_size);
  const UnitId sf = skip_frame_unit(vocab_size);
  const UnitId st = skip_token_unit(vocab_size);
  const double penalty = clamp_log(current_penalty);

  std::vector<double> weights;
  weights.reserve(lattice.num_arcs());
  for (const Arc& arc : lattice.arcs()) {
    const std::int32_t t = arc.label.frame;
    const std::int32_t u = arc.label.unit_position;
    if (t < 0 || t >= num_frames || u < 0 || u > num_units) {
      throw ShapeMismatchError("populate_weights: arc (t=" +
                               std::to_string(t) + ", u=" + std::to_string(u) +
                               ") outside the joint table");
    }
    const UnitId unit = arc.label.unit;
    if (unit == sf) {
      weights.push_back(clamp_log(config.skip_frame_weight));
    } else if (unit == st) {
      if (is_log_zero(penalty)) {
        weights.push_back(kLogZero);
      } else {
        weights.push_back(log_mul(
            penalty,
            mode_value(joint.row(t, u), target.units[u],
                       config.skip_token_mode)));
      }
    } else if (unit == blank) {
      weights.push_back(joint.at(t, u, blank));
    } else if (unit >= 0 && unit < vocab_size) {
      weights.push_back(joint.at(t, u, unit));
    } else {
      throw ShapeMismatchError("populate_weights: unit id " +
                               std::to_string(unit) +
                               " outside the extended vocabulary");
    }
  }
  return lattice.with_weights(weights);
}

LossResult loss_and_grad(const JointLogProbs& joint,
                         const TargetSequence& target,
                         const LossConfig& config, double current_penalty) {
  const std::int32_t num_frames = joint.num_frames();
  const std::int32_t vocab_size = joint.vocab_size();
  if (num_frames < 1) {
    throw ShapeMismatchError("loss_and_grad: need at least one frame");
  }
  if (target.length() != joint.num_units()) {
    throw ShapeMismatchError("loss_and_grad: target length != joint U");
  }

  Wfsa grid = build_grid(target, num_frames, vocab_size, config.kind);
  Wfsa weighted = populate_weights(grid, joint, target, config,
                                   current_penalty);
  double total = forward_log_score(weighted);
  if (is_log_zero(total)) {
    throw NoPathError("loss_and_grad: lattice carries no path mass");
  }

  LossResult result;
  result.loss = -total;
  result.grad = JointLogProbs(num_frames, joint.num_units(), vocab_size, 0.0);

  const UnitId blank = blank_unit(vocab_size);
  const UnitId sf = skip_frame_unit(vocab_size);
  const UnitId st = skip_token_unit(vocab_size);
  const double penalty = clamp_log(current_penalty);

  std::vector<double> post = arc_posteriors(weighted);
  std::size_t i = 0;
  for (const Arc& arc : weighted.arcs()) {
    const double p = post[i++];
    if (p == 0.0) continue;
    const std::int32_t t = arc.label.frame;
    const std::int32_t u = arc.label.unit_position;
    const UnitId unit = arc.label.unit;
    if (unit == sf) continue;  // constant weight, no joint dependence
    if (unit == st) {
      if (is_log_zero(penalty)) continue;
      scatter_skip_token_grad(joint.row(t, u), target.units[u],
                              config.skip_token_mode, p, result.grad.row(t, u));
    } else {
      result.grad.at(t, u, unit == blank ? vocab_size : unit) -= p;
    }
  }
  return result;
}

LossResult loss_and_grad(const JointLogProbs& joint,
                         const TargetSequence& target,
                         const LossConfig& config) {
  return loss_and_grad(joint, target, config, config.skip_token_penalty);
}

namespace {

LossResult scored_item(const BatchItem& item, const LossConfig& config,
                       double current_penalty) {
  const std::int32_t t_valid = item.valid_frames;
  const std::int32_t u_valid = item.valid_units;
  const JointLogProbs& joint = item.joint;
  if (t_valid < 1 || t_valid > joint.num_frames() || u_valid < 0 ||
      u_valid > joint.num_units() || item.target.length() != u_valid) {
    throw ShapeMismatchError("batch_loss: valid region outside padded joint");
  }

  if (t_valid == joint.num_frames() && u_valid == joint.num_units()) {
    return loss_and_grad(joint, item.target, config, current_penalty);
  }

  JointLogProbs sliced(t_valid, u_valid, joint.vocab_size());
  for (std::int32_t t = 0; t < t_valid; ++t) {
    for (std::int32_t u = 0; u <= u_valid; ++u) {
      std::ranges::copy(joint.row(t, u), sliced.row(t, u).begin());
    }
  }
  LossResult inner = loss_and_grad(sliced, item.target, config,
                                   current_penalty);

  LossResult padded;
  padded.loss = inner.loss;
  padded.grad = JointLogProbs(joint.num_frames(), joint.num_units(),
                              joint.vocab_size(), 0.0);
  for (std::int32_t t = 0; t < t_valid; ++t) {
    for (std::int32_t u = 0; u <= u_valid; ++u) {
      std::ranges::copy(inner.grad.row(t, u), padded.grad.row(t, u).begin());
    }
  }
  return padded;
}

}  // namespace

BatchLossResult batch_loss(std::span<const BatchItem> batch,
                           const LossConfig& config, double current_penalty,
                           int num_threads) {
  BatchLossResult result;
  result.items.resize(batch.size());
  parallel_for(batch.size(), num_threads, [&](std::size_t i) {
    result.items[i] = scored_item(batch[i], config, current_penalty);
  });

  double sum = 0.0;
  for (const LossResult& r : result.items) sum += r.loss;
  result.mean_loss = batch.empty() ? 0.0 : sum / batch.size();
  return result;
}

}  // namespace rnntx
