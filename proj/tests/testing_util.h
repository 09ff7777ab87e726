// tests/testing_util.h

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

#ifndef RNNTX_TESTS_TESTING_UTIL_H_
#define RNNTX_TESTS_TESTING_UTIL_H_

#include <algorithm>
#include <string>
#include <vector>

#include "rnntx/fsa.h"
#include "rnntx/log_space.h"
#include "rnntx/loss.h"
#include "rnntx/rng.h"

namespace rnntx::testing {

// Random acyclic automaton: arcs only go from lower to higher ids, with a
// guaranteed start->final spine so a path always exists.
inline Wfsa random_dag(RandomStream& stream, std::int32_t max_states = 6) {
  const std::int32_t n =
      2 + static_cast<std::int32_t>(stream.uniform_int(max_states - 1));
  WfsaBuilder builder(n, n - 1);
  for (StateId s = 0; s + 1 < n; ++s) {
    builder.add_arc(s, s + 1, ArcLabel{0, kNoIndex, kNoIndex},
                    -3.0 * stream.uniform());
  }
  const std::int32_t extra =
      static_cast<std::int32_t>(stream.uniform_int(2 * n));
  for (std::int32_t k = 0; k < extra; ++k) {
    StateId src = static_cast<StateId>(stream.uniform_int(n - 1));
    StateId dst =
        src + 1 + static_cast<StateId>(stream.uniform_int(n - 1 - src));
    builder.add_arc(src, dst,
                    ArcLabel{static_cast<UnitId>(stream.uniform_int(3)),
                             kNoIndex, kNoIndex},
                    -3.0 * stream.uniform());
  }
  return std::move(builder).build();
}

// Independent total-score oracle: exhaustive path enumeration.
inline double brute_force_log_score(const Wfsa& fsa,
                                    std::size_t max_paths = 100000) {
  double total = kLogZero;
  for (const Path& path : enumerate_paths(fsa, max_paths)) {
    total = log_add(total, path.weight);
  }
  return total;
}

// Minimal word edit distance by exhaustive recursion; the oracle for align().
inline std::int64_t brute_force_edit_distance(
    std::span<const std::string> ref, std::span<const std::string> hyp) {
  if (ref.empty()) return static_cast<std::int64_t>(hyp.size());
  if (hyp.empty()) return static_cast<std::int64_t>(ref.size());
  std::int64_t subst = brute_force_edit_distance(ref.subspan(1),
                                                 hyp.subspan(1)) +
                       (ref[0] == hyp[0] ? 0 : 1);
  std::int64_t insert = brute_force_edit_distance(ref, hyp.subspan(1)) + 1;
  std::int64_t remove = brute_force_edit_distance(ref.subspan(1), hyp) + 1;
  return std::min({subst, insert, remove});
}

// Random log-normalized joint table.
inline JointLogProbs random_joint(RandomStream& stream, std::int32_t frames,
                                  std::int32_t units, std::int32_t vocab) {
  JointLogProbs joint(frames, units, vocab);
  for (double& x : joint.flat()) x = 2.0 * stream.normal();
  joint.normalize_rows();
  return joint;
}

inline TargetSequence random_target(RandomStream& stream, std::int32_t units,
                                    std::int32_t vocab) {
  TargetSequence target;
  target.units.resize(units);
  for (UnitId& u : target.units) {
    u = static_cast<UnitId>(stream.uniform_int(vocab));
  }
  return target;
}

// Light structural check that a string is a well-formed DOT digraph: one
// digraph block, and every statement is a node, an edge, or an attribute.
inline bool looks_like_dot(const std::string& text) {
  if (text.rfind("digraph", 0) != 0) return false;
  long depth = std::count(text.begin(), text.end(), '{') -
               std::count(text.begin(), text.end(), '}');
  if (depth != 0) return false;
  std::size_t pos = text.find('{');
  std::size_t end = text.rfind('}');
  if (pos == std::string::npos || end == std::string::npos) return false;
  std::size_t line_start = pos + 1;
  while (line_start < end) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos || line_end > end) line_end = end;
    std::string line = text.substr(line_start, line_end - line_start);
    line.erase(0, line.find_first_not_of(" \t"));
    if (!line.empty() && line.back() != ';') return false;
    line_start = line_end + 1;
  }
  return true;
}

}  // namespace rnntx::testing

#endif  // RNNTX_TESTS_TESTING_UTIL_H_
