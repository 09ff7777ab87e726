// core/src/selfcheck.cc

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

#include "rnntx/selfcheck.h"

#include <cmath>

#include "rnntx/rng.h"

namespace rnntx {

namespace {

constexpr LossKind kKinds[] = {LossKind::kRnnt, LossKind::kStar,
                               LossKind::kBypass, LossKind::kTrt};
constexpr SkipTokenMode kModes[] = {
    SkipTokenMode::kConstant, SkipTokenMode::kMean, SkipTokenMode::kMax,
    SkipTokenMode::kMaxExcl, SkipTokenMode::kSumExcl};

struct Instance {
  JointLogProbs joint;
  TargetSequence target;
  LossConfig config;
};

// One random (joint, target, config) tuple. maxexcl/sumexcl need a second
// non-blank label, so those draws force V >= 2.
Instance random_instance(const CheckOptions& options, std::int64_t trial,
                         RandomStream& stream) {
  Instance inst;
  inst.config.kind = kKinds[trial % 4];
  inst.config.skip_token_mode = kModes[(trial / 4) % 5];

  const bool needs_excl =
      inst.config.skip_token_mode == SkipTokenMode::kMaxExcl ||
      inst.config.skip_token_mode == SkipTokenMode::kSumExcl;
  const std::int32_t min_vocab = needs_excl ? 2 : 1;
  const std::int32_t vocab =
      min_vocab +
      static_cast<std::int32_t>(stream.uniform_int(
          std::max(1, options.max_vocab - min_vocab + 1)));
  const std::int32_t frames =
      1 + static_cast<std::int32_t>(stream.uniform_int(options.max_frames));
  const std::int32_t units =
      static_cast<std::int32_t>(stream.uniform_int(options.max_units + 1));

  inst.target.units.resize(units);
  for (UnitId& u : inst.target.units) {
    u = static_cast<UnitId>(stream.uniform_int(vocab));
  }

  inst.joint = JointLogProbs(frames, units, vocab);
  for (double& x : inst.joint.flat()) x = 2.0 * stream.normal();
  inst.joint.normalize_rows();

  inst.config.skip_frame_weight = -3.0 * stream.uniform();
  inst.config.skip_token_penalty = -3.0 * stream.uniform();
  return inst;
}

double oracle_loss(const Instance& inst) {
  Wfsa grid = build_grid(inst.target, inst.joint.num_frames(),
                         inst.joint.vocab_size(), inst.config.kind);
  Wfsa weighted = populate_weights(grid, inst.joint, inst.target, inst.config,
                                   inst.config.skip_token_penalty);
  double total = kLogZero;
  for (const Path& path : enumerate_paths(weighted, 200000)) {
    total = log_add(total, path.weight);
  }
  return -total;
}

}  // namespace

CheckSummary check_loss_oracle(const CheckOptions& options) {
  CheckSummary summary;
  RandomStream stream = RandomStream::derive(options.seed, "oracle");
  for (std::int64_t trial = 0; trial < options.trials; ++trial) {
    Instance inst = random_instance(options, trial, stream);
    LossResult dp = loss_and_grad(inst.joint, inst.target, inst.config);
    double dev = std::abs(dp.loss - oracle_loss(inst));
    summary.max_deviation = std::max(summary.max_deviation, dev);
    ++summary.trials;
    if (!(dev < 1e-8)) ++summary.failures;
  }
  return summary;
}

CheckSummary check_loss_gradients(const CheckOptions& options) {
  constexpr double kStep = 1e-5;
  CheckSummary summary;
  RandomStream stream = RandomStream::derive(options.seed, "grad");
  for (std::int64_t trial = 0; trial < options.trials; ++trial) {
    Instance inst = random_instance(options, trial, stream);
    // Single-entry perturbations leave rows unnormalized by design.
    inst.config.check_normalized = false;

    LossResult analytic = loss_and_grad(inst.joint, inst.target, inst.config);
    if (options.inject_gradient_fault) {
      analytic.grad.at(0, 0, 0) = -analytic.grad.at(0, 0, 0) - 1.0;
    }

    double worst = 0.0;
    std::span<double> values = inst.joint.flat();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + kStep;
      double up = loss_and_grad(inst.joint, inst.target, inst.config).loss;
      values[i] = saved - kStep;
      double down = loss_and_grad(inst.joint, inst.target, inst.config).loss;
      values[i] = saved;

      const double fd = (up - down) / (2.0 * kStep);
      const double a = analytic.grad.flat()[i];
      const double rel =
          std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-4});
      worst = std::max(worst, rel);
    }
    summary.max_deviation = std::max(summary.max_deviation, worst);
    ++summary.trials;
    if (!(worst < 1e-4)) ++summary.failures;
  }
  return summary;
}

CheckSummary check_degeneration(const CheckOptions& options) {
  CheckSummary summary;
  RandomStream stream = RandomStream::derive(options.seed, "degenerate");

  struct Identity {
    LossKind reduced_kind;
    bool kill_skip_frame;
    bool kill_skip_token;
    LossKind reference_kind;
  };
  const Identity identities[] = {
      {LossKind::kStar, true, false, LossKind::kRnnt},
      {LossKind::kBypass, false, true, LossKind::kRnnt},
      {LossKind::kTrt, true, true, LossKind::kRnnt},
      {LossKind::kTrt, true, false, LossKind::kBypass},
      {LossKind::kTrt, false, true, LossKind::kStar},
  };

  for (std::int64_t trial = 0; trial < options.trials; ++trial) {
    Instance inst = random_instance(options, trial, stream);
    for (const Identity& id : identities) {
      LossConfig reduced = inst.config;
      reduced.kind = id.reduced_kind;
      if (id.kill_skip_frame) reduced.skip_frame_weight = kLogZero;
      if (id.kill_skip_token) reduced.skip_token_penalty = kLogZero;

      LossConfig reference = inst.config;
      reference.kind = id.reference_kind;

      LossResult a = loss_and_grad(inst.joint, inst.target, reduced);
      LossResult b = loss_and_grad(inst.joint, inst.target, reference);

      double dev = std::abs(a.loss - b.loss);
      std::span<const double> ga = a.grad.flat();
      std::span<const double> gb = b.grad.flat();
      for (std::size_t i = 0; i < ga.size(); ++i) {
        dev = std::max(dev, std::abs(ga[i] - gb[i]));
      }
      summary.max_deviation = std::max(summary.max_deviation, dev);
      ++summary.trials;
      if (!(dev < 1e-8)) ++summary.failures;
    }
  }
  return summary;
}

}  // namespace rnntx
