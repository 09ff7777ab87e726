// core/include/rnntx/lattice.h

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

#ifndef RNNTX_LATTICE_H_
#define RNNTX_LATTICE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rnntx/fsa.h"

namespace rnntx {

// The loss family. star adds skip-frame arcs, bypass adds skip-token arcs,
// trt adds both; rnnt is the plain grid.
enum class LossKind { kRnnt, kStar, kBypass, kTrt };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

inline bool has_skip_frame(LossKind k) {
  return k == LossKind::kStar || k == LossKind::kTrt;
}
inline bool has_skip_token(LossKind k) {
  return k == LossKind::kBypass || k == LossKind::kTrt;
}

// Extended-vocabulary ids for a base vocabulary of size V.
inline UnitId blank_unit(std::int32_t vocab_size) { return vocab_size; }
inline UnitId skip_frame_unit(std::int32_t vocab_size) {
  return vocab_size + 1;
}
inline UnitId skip_token_unit(std::int32_t vocab_size) {
  return vocab_size + 2;
}

// Target text as token ids, each in [0, V).
struct TargetSequence {
  std::vector<UnitId> units;

  std::int32_t length() const { return static_cast<std::int32_t>(units.size()); }
};

// Throws InvalidTargetError when a unit falls outside [0, V).
void validate_target(const TargetSequence& target, std::int32_t vocab_size);

struct LatticeShape {
  std::int32_t num_frames = 1;   // T >= 1
  std::int32_t num_units = 0;    // U >= 0
  std::int32_t vocab_size = 1;   // V >= 1
};

// Linear automaton over target positions 0..U (final state U+1).
// Every position carries a blank self-loop; rnnt-family forward arcs carry
// the target unit; star adds skip-frame self-loops, bypass adds skip-token
// forward arcs parallel to the unit arcs, trt adds both. State U exits to
// the final state on blank.
Wfsa build_unit_schema(const TargetSequence& target, std::int32_t vocab_size,
                       LossKind kind);

// Linear automaton over frames 0..T (final state T). Every frame carries
// self-loops for all non-blank vocabulary units (plus skip-token for
// bypass/trt) and advances on blank (plus a parallel skip-frame arc for
// star/trt).
Wfsa build_temporal_schema(std::int32_t num_frames, std::int32_t vocab_size,
                           LossKind kind);

// Direct construction of the T x (U+1) alignment lattice; equals
// connect(compose(unit, temporal)) up to canonical renumbering. Interior
// state ids are row-major: t * (U+1) + u; the extra final state comes last.
// The terminal transition from (T-1, U) accepts blank only.
Wfsa build_grid(const TargetSequence& target, std::int32_t num_frames,
                std::int32_t vocab_size, LossKind kind);

inline StateId grid_state(std::int32_t t, std::int32_t u,
                          std::int32_t num_units) {
  return t * (num_units + 1) + u;
}

}  // namespace rnntx

#endif  // RNNTX_LATTICE_H_
