// core/src/fsa.cc

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

#include "rnntx/fsa.h"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "rnntx/error.h"

namespace rnntx {

namespace {

auto arc_sort_key(const Arc& a) {
  return std::make_tuple(a.src, a.dst, a.label.unit, a.label.unit_position,
                         a.label.frame);
}

}  // namespace

WfsaBuilder::WfsaBuilder(StateId num_states, StateId final_state)
    : num_states_(num_states), final_state_(final_state) {
  if (num_states < 1 || final_state < 0 || final_state >= num_states) {
    throw Error("WfsaBuilder: bad state counts");
  }
}

void WfsaBuilder::add_arc(StateId src, StateId dst, ArcLabel label,
                          double weight) {
  if (src < 0 || src >= num_states_ || dst < 0 || dst >= num_states_) {
    throw Error("WfsaBuilder: arc endpoint out of range");
  }
  if (src == final_state_) {
    throw Error("WfsaBuilder: final state cannot have outgoing arcs");
  }
  arcs_.push_back(Arc{src, dst, label, clamp_log(weight)});
}

Wfsa WfsaBuilder::build() && {
  std::stable_sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
    return arc_sort_key(a) < arc_sort_key(b);
  });
  Wfsa out;
  out.num_states_ = num_states_;
  out.final_state_ = final_state_;
  out.arcs_ = std::move(arcs_);
  out.row_offsets_.assign(num_states_ + 1, 0);
  for (const Arc& a : out.arcs_) ++out.row_offsets_[a.src + 1];
  for (StateId s = 0; s < num_states_; ++s) {
    out.row_offsets_[s + 1] += out.row_offsets_[s];
  }
  return out;
}

Wfsa Wfsa::with_weights(std::span<const double> weights) const {
  if (weights.size() != arcs_.size()) {
    throw ShapeMismatchError("with_weights: weight count != arc count");
  }
  Wfsa out = *this;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out.arcs_[i].weight = clamp_log(weights[i]);
  }
  return out;
}

std::vector<StateId> topo_order(const Wfsa& fsa) {
  const StateId n = fsa.num_states();
  std::vector<std::int32_t> in_degree(n, 0);
  for (const Arc& a : fsa.arcs()) ++in_degree[a.dst];

  // Min-heap on state id gives the unique lexicographically smallest order.
  std::priority_queue<StateId, std::vector<StateId>, std::greater<StateId>>
      ready;
  for (StateId s = 0; s < n; ++s) {
    if (in_degree[s] == 0) ready.push(s);
  }
  std::vector<StateId> order;
  order.reserve(n);
  while (!ready.empty()) {
    StateId s = ready.top();
    ready.pop();
    order.push_back(s);
    for (const Arc& a : fsa.arcs_from(s)) {
      if (--in_degree[a.dst] == 0) ready.push(a.dst);
    }
  }
  if (static_cast<StateId>(order.size()) != n) {
    throw CyclicGraphError("topo_order: graph has a cycle");
  }
  return order;
}

std::vector<double> forward_scores(const Wfsa& fsa) {
  std::vector<StateId> order = topo_order(fsa);
  std::vector<double> alpha(fsa.num_states(), kLogZero);
  alpha[fsa.start()] = 0.0;
  for (StateId s : order) {
    if (is_log_zero(alpha[s])) continue;
    for (const Arc& a : fsa.arcs_from(s)) {
      alpha[a.dst] = log_add(alpha[a.dst], log_mul(alpha[s], a.weight));
    }
  }
  return alpha;
}

double forward_log_score(const Wfsa& fsa) {
  return forward_scores(fsa)[fsa.final_state()];
}

std::vector<double> backward_log_score(const Wfsa& fsa) {
  std::vector<StateId> order = topo_order(fsa);
  std::vector<double> beta(fsa.num_states(), kLogZero);
  beta[fsa.final_state()] = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (const Arc& a : fsa.arcs_from(*it)) {
      beta[*it] = log_add(beta[*it], log_mul(a.weight, beta[a.dst]));
    }
  }
  return beta;
}

std::vector<double> arc_posteriors(const Wfsa& fsa) {
  std::vector<double> alpha = forward_scores(fsa);
  std::vector<double> beta = backward_log_score(fsa);
  double total = alpha[fsa.final_state()];
  if (is_log_zero(total)) {
    throw NoPathError("arc_posteriors: no start->final path carries mass");
  }
  std::vector<double> post(fsa.num_arcs(), 0.0);
  std::size_t i = 0;
  for (const Arc& a : fsa.arcs()) {
    double mass = log_mul(log_mul(alpha[a.src], a.weight), beta[a.dst]);
    post[i++] =
        is_log_zero(mass) ? 0.0 : std::min(1.0, std::exp(mass - total));
  }
  return post;
}

Wfsa compose(const Wfsa& left, const Wfsa& right) {
  const std::int64_t rn = right.num_states();
  auto key = [rn](StateId ls, StateId rs) {
    return static_cast<std::int64_t>(ls) * rn + rs;
  };

  std::unordered_map<std::int64_t, StateId> ids;
  std::vector<std::pair<StateId, StateId>> pairs;
  std::deque<StateId> queue;

  auto intern = [&](StateId ls, StateId rs) {
    auto [it, inserted] = ids.try_emplace(key(ls, rs),
                                          static_cast<StateId>(pairs.size()));
    if (inserted) {
      pairs.emplace_back(ls, rs);
      queue.push_back(it->second);
    }
    return it->second;
  };

  intern(left.start(), right.start());
  std::vector<Arc> arcs;
  while (!queue.empty()) {
    StateId id = queue.front();
    queue.pop_front();
    auto [ls, rs] = pairs[id];
    if (ls == left.final_state() || rs == right.final_state()) continue;
    for (const Arc& la : left.arcs_from(ls)) {
      for (const Arc& ra : right.arcs_from(rs)) {
        if (la.label.unit != ra.label.unit) continue;
        StateId dst = intern(la.dst, ra.dst);
        ArcLabel label{la.label.unit, la.label.unit_position, ra.label.frame};
        arcs.push_back(
            Arc{id, dst, label, log_mul(la.weight, ra.weight)});
      }
    }
  }

  // The final pair may be unreachable; it still must exist so the result is
  // a well-formed (if empty) automaton.
  StateId final_id;
  auto it = ids.find(key(left.final_state(), right.final_state()));
  if (it != ids.end()) {
    final_id = it->second;
  } else {
    final_id = static_cast<StateId>(pairs.size());
    pairs.emplace_back(left.final_state(), right.final_state());
  }

  WfsaBuilder builder(static_cast<StateId>(pairs.size()), final_id);
  for (const Arc& a : arcs) builder.add_arc(a);
  return std::move(builder).build();
}

Wfsa connect(const Wfsa& fsa) {
  const StateId n = fsa.num_states();
  std::vector<char> reach(n, 0), coreach(n, 0);

  std::deque<StateId> queue{fsa.start()};
  reach[fsa.start()] = 1;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const Arc& a : fsa.arcs_from(s)) {
      if (!reach[a.dst]) {
        reach[a.dst] = 1;
        queue.push_back(a.dst);
      }
    }
  }

  std::vector<std::vector<StateId>> rev(n);
  for (const Arc& a : fsa.arcs()) rev[a.dst].push_back(a.src);
  queue.push_back(fsa.final_state());
  coreach[fsa.final_state()] = 1;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId p : rev[s]) {
      if (!coreach[p]) {
        coreach[p] = 1;
        queue.push_back(p);
      }
    }
  }

  // Start and final always survive so the result stays well-formed even when
  // no path exists.
  std::vector<StateId> remap(n, -1);
  StateId next = 0;
  for (StateId s = 0; s < n; ++s) {
    if ((reach[s] && coreach[s]) || s == fsa.start() ||
        s == fsa.final_state()) {
      remap[s] = next++;
    }
  }

  WfsaBuilder builder(next, remap[fsa.final_state()]);
  for (const Arc& a : fsa.arcs()) {
    if (remap[a.src] >= 0 && remap[a.dst] >= 0 && reach[a.src] &&
        coreach[a.src] && reach[a.dst] && coreach[a.dst]) {
      builder.add_arc(remap[a.src], remap[a.dst], a.label, a.weight);
    }
  }
  return std::move(builder).build();
}

namespace {

void enumerate_rec(const Wfsa& fsa, StateId s, std::vector<std::int32_t>& trail,
                   double weight, std::size_t max_paths,
                   std::vector<Path>& out) {
  if (s == fsa.final_state()) {
    if (out.size() >= max_paths) {
      throw TooManyPathsError("enumerate_paths: path bound exceeded");
    }
    out.push_back(Path{trail, weight});
    return;
  }
  std::span<const Arc> all = fsa.arcs();
  for (const Arc& a : fsa.arcs_from(s)) {
    trail.push_back(static_cast<std::int32_t>(&a - all.data()));
    enumerate_rec(fsa, a.dst, trail, log_mul(weight, a.weight), max_paths,
                  out);
    trail.pop_back();
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const Wfsa& fsa, std::size_t max_paths) {
  topo_order(fsa);  // reject cyclic inputs up front
  std::vector<Path> out;
  std::vector<std::int32_t> trail;
  enumerate_rec(fsa, fsa.start(), trail, 0.0, max_paths, out);
  return out;
}

namespace {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

std::string format_unit(UnitId unit, std::int32_t vocab_size) {
  if (vocab_size >= 0) {
    if (unit == vocab_size) return "b";
    if (unit == vocab_size + 1) return "sf";
    if (unit == vocab_size + 2) return "st";
  }
  return std::to_string(unit);
}

std::string format_index(std::int32_t idx) {
  return idx == kNoIndex ? "-" : std::to_string(idx);
}

}  // namespace

std::string to_dot(const Wfsa& fsa, std::int32_t vocab_size) {
  std::string out;
  out += "digraph wfsa {\n";
  out += "  rankdir = LR;\n";
  out += "  node [shape = circle];\n";
  out += "  init [shape = point];\n";
  out += "  init -> " + std::to_string(fsa.start()) + ";\n";
  for (StateId s = 0; s < fsa.num_states(); ++s) {
    out += "  " + std::to_string(s);
    if (s == fsa.final_state()) out += " [shape = doublecircle]";
    out += ";\n";
  }
  for (const Arc& a : fsa.arcs()) {
    out += "  " + std::to_string(a.src) + " -> " + std::to_string(a.dst) +
           " [label = \"(" + format_unit(a.label.unit, vocab_size) + "," +
           format_index(a.label.unit_position) +
           "):" + format_index(a.label.frame) + "/" +
           format_number(a.weight) + "\"];\n";
  }
  out += "}\n";
  return out;
}

namespace {

Wfsa renumber(const Wfsa& fsa, const std::vector<StateId>& remap) {
  WfsaBuilder builder(fsa.num_states(), remap[fsa.final_state()]);
  for (const Arc& a : fsa.arcs()) {
    builder.add_arc(remap[a.src], remap[a.dst], a.label, a.weight);
  }
  return std::move(builder).build();
}

}  // namespace

Wfsa canonical_form(const Wfsa& fsa) {
  const StateId n = fsa.num_states();

  // Phase 1: label-driven BFS discovery order. Arc exploration is keyed on
  // the label triple (self-loops before exits on the rare label tie), which
  // does not depend on the input state numbering.
  std::vector<StateId> remap(n, -1);
  StateId next = 0;
  std::deque<StateId> queue{fsa.start()};
  remap[fsa.start()] = next++;
  std::vector<const Arc*> sorted;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    std::span<const Arc> row = fsa.arcs_from(s);
    sorted.assign(row.size(), nullptr);
    for (std::size_t i = 0; i < row.size(); ++i) sorted[i] = &row[i];
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Arc* a, const Arc* b) {
                       auto ka = std::make_tuple(a->label.unit,
                                                 a->label.unit_position,
                                                 a->label.frame,
                                                 a->dst == a->src ? 0 : 1);
                       auto kb = std::make_tuple(b->label.unit,
                                                 b->label.unit_position,
                                                 b->label.frame,
                                                 b->dst == b->src ? 0 : 1);
                       return ka < kb;
                     });
    for (const Arc* a : sorted) {
      if (remap[a->dst] < 0) {
        remap[a->dst] = next++;
        queue.push_back(a->dst);
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (remap[s] < 0) remap[s] = next++;  // unreachable leftovers, in order
  }
  Wfsa bfs_form = renumber(fsa, remap);

  // Phase 2: smallest topological order of the renumbered graph, so the
  // canonical numbering is also topological.
  std::vector<StateId> order = topo_order(bfs_form);
  std::vector<StateId> topo_remap(n);
  for (StateId pos = 0; pos < n; ++pos) topo_remap[order[pos]] = pos;
  return renumber(bfs_form, topo_remap);
}

bool canonical_equal(const Wfsa& a, const Wfsa& b, double weight_tol) {
  Wfsa ca = canonical_form(a);
  Wfsa cb = canonical_form(b);
  if (ca.num_states() != cb.num_states() ||
      ca.final_state() != cb.final_state() ||
      ca.num_arcs() != cb.num_arcs()) {
    return false;
  }
  for (std::size_t i = 0; i < ca.num_arcs(); ++i) {
    const Arc& x = ca.arcs()[i];
    const Arc& y = cb.arcs()[i];
    if (x.src != y.src || x.dst != y.dst || !(x.label == y.label)) {
      return false;
    }
    if (std::abs(x.weight - y.weight) > weight_tol) return false;
  }
  return true;
}

}  // namespace rnntx
