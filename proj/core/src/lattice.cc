// core/src/lattice.cc

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

#include "rnntx/lattice.h"

#include "rnntx/error.h"

namespace rnntx {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kRnnt:
      return "rnnt";
    case LossKind::kStar:
      return "star";
    case LossKind::kBypass:
      return "bypass";
    case LossKind::kTrt:
      return "trt";
  }
  throw Error("to_string: bad LossKind");
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "rnnt") return LossKind::kRnnt;
  if (name == "star") return LossKind::kStar;
  if (name == "bypass") return LossKind::kBypass;
  if (name == "trt") return LossKind::kTrt;
  throw Error("unknown loss kind: " + name);
}

void validate_target(const TargetSequence& target, std::int32_t vocab_size) {
  for (UnitId u : target.units) {
    if (u < 0 || u >= vocab_size) {
      throw InvalidTargetError("target unit " + std::to_string(u) +
                               " outside vocabulary of size " +
                               std::to_string(vocab_size));
    }
  }
}

Wfsa build_unit_schema(const TargetSequence& target, std::int32_t vocab_size,
                       LossKind kind) {
  validate_target(target, vocab_size);
  const std::int32_t num_units = target.length();
  const UnitId blank = blank_unit(vocab_size);
  const StateId final_state = num_units + 1;
  WfsaBuilder builder(num_units + 2, final_state);

  for (std::int32_t u = 0; u <= num_units; ++u) {
    builder.add_arc(u, u, ArcLabel{blank, u, kNoIndex});
    if (has_skip_frame(kind)) {
      builder.add_arc(u, u, ArcLabel{skip_frame_unit(vocab_size), u, kNoIndex});
    }
    if (u < num_units) {
      builder.add_arc(u, u + 1, ArcLabel{target.units[u], u, kNoIndex});
      if (has_skip_token(kind)) {
        builder.add_arc(u, u + 1,
                        ArcLabel{skip_token_unit(vocab_size), u, kNoIndex});
      }
    }
  }
  builder.add_arc(num_units, final_state, ArcLabel{blank, num_units, kNoIndex});
  return std::move(builder).build();
}

Wfsa build_temporal_schema(std::int32_t num_frames, std::int32_t vocab_size,
                           LossKind kind) {
  if (num_frames < 1) throw Error("build_temporal_schema: T must be >= 1");
  const UnitId blank = blank_unit(vocab_size);
  WfsaBuilder builder(num_frames + 1, num_frames);

  for (std::int32_t t = 0; t < num_frames; ++t) {
    for (UnitId v = 0; v < vocab_size; ++v) {
      builder.add_arc(t, t, ArcLabel{v, kNoIndex, t});
    }
    if (has_skip_token(kind)) {
      builder.add_arc(t, t, ArcLabel{skip_token_unit(vocab_size), kNoIndex, t});
    }
    builder.add_arc(t, t + 1, ArcLabel{blank, kNoIndex, t});
    if (has_skip_frame(kind)) {
      builder.add_arc(t, t + 1,
                      ArcLabel{skip_frame_unit(vocab_size), kNoIndex, t});
    }
  }
  return std::move(builder).build();
}

Wfsa build_grid(const TargetSequence& target, std::int32_t num_frames,
                std::int32_t vocab_size, LossKind kind) {
  if (num_frames < 1) throw Error("build_grid: T must be >= 1");
  validate_target(target, vocab_size);
  const std::int32_t num_units = target.length();
  const UnitId blank = blank_unit(vocab_size);
  const StateId final_state = num_frames * (num_units + 1);
  WfsaBuilder builder(final_state + 1, final_state);

  for (std::int32_t t = 0; t < num_frames; ++t) {
    for (std::int32_t u = 0; u <= num_units; ++u) {
      const StateId s = grid_state(t, u, num_units);
      if (t + 1 < num_frames) {
        const StateId right = grid_state(t + 1, u, num_units);
        builder.add_arc(s, right, ArcLabel{blank, u, t});
        if (has_skip_frame(kind)) {
          builder.add_arc(s, right,
                          ArcLabel{skip_frame_unit(vocab_size), u, t});
        }
      }
      if (u < num_units) {
        const StateId up = grid_state(t, u + 1, num_units);
        builder.add_arc(s, up, ArcLabel{target.units[u], u, t});
        if (has_skip_token(kind)) {
          builder.add_arc(s, up, ArcLabel{skip_token_unit(vocab_size), u, t});
        }
      }
    }
  }
  builder.add_arc(grid_state(num_frames - 1, num_units, num_units),
                  final_state, ArcLabel{blank, num_units, num_frames - 1});
  return std::move(builder).build();
}

}  // namespace rnntx
