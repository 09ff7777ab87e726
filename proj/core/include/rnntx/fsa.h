// core/include/rnntx/fsa.h

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

#ifndef RNNTX_FSA_H_
#define RNNTX_FSA_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rnntx/log_space.h"

namespace rnntx {

using StateId = std::int32_t;
using UnitId = std::int32_t;

// Sentinel for "no unit position" / "no frame" on schema arcs.
inline constexpr std::int32_t kNoIndex = -1;

// Arc label triple. `unit` is an extended-vocabulary id: 0..V-1 are plain
// tokens, V is blank, V+1 skip-frame, V+2 skip-token (see lattice.h).
// `unit_position` indexes into the target sequence (0..U) and `frame` is the
// encoder frame index (0..T-1); either may be kNoIndex on schema graphs where
// that coordinate is not yet bound.
struct ArcLabel {
  UnitId unit = 0;
  std::int32_t unit_position = kNoIndex;
  std::int32_t frame = kNoIndex;

  friend bool operator==(const ArcLabel&, const ArcLabel&) = default;
};

struct Arc {
  StateId src = 0;
  StateId dst = 0;
  ArcLabel label;
  double weight = 0.0;  // log-domain score
};

// An acyclic weighted automaton with a single start state (always 0) and a
// single final state. Immutable after construction; arcs are stored grouped
// by source in (src, dst, unit, unit_position, frame) lexicographic order,
// which makes iteration, DOT export and tie-breaking deterministic.
class Wfsa {
 public:
  Wfsa() = default;

  StateId num_states() const { return num_states_; }
  StateId start() const { return 0; }
  StateId final_state() const { return final_state_; }

  std::span<const Arc> arcs() const { return arcs_; }
  std::size_t num_arcs() const { return arcs_.size(); }

  std::span<const Arc> arcs_from(StateId s) const {
    return std::span<const Arc>(arcs_.data() + row_offsets_[s],
                                row_offsets_[s + 1] - row_offsets_[s]);
  }

  // Same structure, new weights (one entry per arc, in arcs() order).
  Wfsa with_weights(std::span<const double> weights) const;

 private:
  friend class WfsaBuilder;

  StateId num_states_ = 0;
  StateId final_state_ = 0;
  std::vector<Arc> arcs_;                  // sorted, grouped by src
  std::vector<std::int32_t> row_offsets_;  // size num_states_ + 1
};

// Accumulates arcs, then freezes them into the canonical storage order.
// The final state must have no outgoing arcs.
class WfsaBuilder {
 public:
  WfsaBuilder(StateId num_states, StateId final_state);

  void add_arc(StateId src, StateId dst, ArcLabel label, double weight = 0.0);
  void add_arc(Arc arc) { add_arc(arc.src, arc.dst, arc.label, arc.weight); }

  Wfsa build() &&;

 private:
  StateId num_states_;
  StateId final_state_;
  std::vector<Arc> arcs_;
};

// Topological ordering (lexicographically smallest by state id).
// Throws CyclicGraphError when the graph has a cycle.
std::vector<StateId> topo_order(const Wfsa& fsa);

// log sum over all start->final paths of exp(sum of arc weights).
// Returns kLogZero when the final state is unreachable.
double forward_log_score(const Wfsa& fsa);

// Per-state prefix scores: alpha[s] = log-mass of all start->s paths.
std::vector<double> forward_scores(const Wfsa& fsa);

// Per-state suffix scores: beta[s] = log-mass of all s->final paths;
// beta[start] equals forward_log_score.
std::vector<double> backward_log_score(const Wfsa& fsa);

// Occupancy of each arc (in arcs() order) among accepted paths; equals
// d(forward_log_score)/d(arc weight). Throws NoPathError when the total
// score carries no mass.
std::vector<double> arc_posteriors(const Wfsa& fsa);

// Transducer composition matching on `unit`. The left graph supplies
// (unit, unit_position), the right graph supplies the frame; weights add.
// The result may contain dead states until connect() is applied.
Wfsa compose(const Wfsa& unit_schema, const Wfsa& temporal_schema);

// Removes states that lie on no start->final path (keeping start and final),
// renumbering survivors in ascending old-id order. Forward score is
// unchanged.
Wfsa connect(const Wfsa& fsa);

struct Path {
  std::vector<std::int32_t> arc_indices;  // into arcs() order
  double weight = 0.0;
};

// Exhaustive DFS path enumeration; throws TooManyPathsError above max_paths.
std::vector<Path> enumerate_paths(const Wfsa& fsa, std::size_t max_paths);

// Graphviz export. Arcs render as "(unit,pos):frame/weight"; with
// vocab_size >= 0 the special units render as b / sf / st. Output is
// byte-deterministic for identical input.
std::string to_dot(const Wfsa& fsa, std::int32_t vocab_size = -1);

// Structure-canonical renumbering: a label-driven BFS discovery order
// (independent of input state ids) followed by the lexicographically
// smallest topological order. Two isomorphic connected graphs canonicalize
// to identical state numbering and arc order.
Wfsa canonical_form(const Wfsa& fsa);

// True when the canonical forms match structurally and arc weights agree
// within weight_tol.
bool canonical_equal(const Wfsa& a, const Wfsa& b, double weight_tol = 0.0);

}  // namespace rnntx

#endif  // RNNTX_FSA_H_
