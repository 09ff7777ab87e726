// tests/test_lattice.cc

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

#include <algorithm>

#include "doctest.h"
#include "rnntx/error.h"
#include "rnntx/lattice.h"
#include "testing_util.h"

using namespace rnntx;

namespace {

constexpr LossKind kAllKinds[] = {LossKind::kRnnt, LossKind::kStar,
                                  LossKind::kBypass, LossKind::kTrt};

std::int64_t count_unit(const Wfsa& fsa, UnitId unit, bool self_loops_only) {
  std::int64_t n = 0;
  for (const Arc& a : fsa.arcs()) {
    if (a.label.unit == unit && (!self_loops_only || a.src == a.dst)) ++n;
  }
  return n;
}

// Synthetic target 0, 1, 2, ... (mod V).
TargetSequence ramp_target(std::int32_t units, std::int32_t vocab) {
  TargetSequence t;
  for (std::int32_t u = 0; u < units; ++u) t.units.push_back(u % vocab);
  return t;
}

}  // namespace

TEST_CASE("rnnt unit schema layout for a 3-unit target") {
  TargetSequence cat{{2, 0, 1}};  // "CAT" as three distinct units
  Wfsa schema = build_unit_schema(cat, 3, LossKind::kRnnt);
  CHECK(schema.num_states() == 5);  // positions 0..3 plus final
  CHECK(count_unit(schema, blank_unit(3), /*self_loops_only=*/true) == 4);

  std::int64_t label_arcs = 0;
  for (const Arc& a : schema.arcs()) {
    if (a.label.unit < 3) {
      CHECK(a.dst == a.src + 1);
      CHECK(a.label.unit == cat.units[a.label.unit_position]);
      ++label_arcs;
    }
  }
  CHECK(label_arcs == 3);

  // The only arc into the final state accepts blank at position U.
  std::int64_t final_arcs = 0;
  for (const Arc& a : schema.arcs()) {
    if (a.dst == schema.final_state()) {
      CHECK(a.label.unit == blank_unit(3));
      CHECK(a.label.unit_position == 3);
      ++final_arcs;
    }
  }
  CHECK(final_arcs == 1);
}

TEST_CASE("bypass unit schema has one skip-token arc parallel to each label") {
  TargetSequence target{{0}};
  Wfsa schema = build_unit_schema(target, 2, LossKind::kBypass);
  std::int64_t st_arcs = 0;
  for (const Arc& a : schema.arcs()) {
    if (a.label.unit == skip_token_unit(2)) {
      CHECK(a.src == 0);
      CHECK(a.dst == 1);
      CHECK(a.label.unit_position == 0);
      ++st_arcs;
    }
  }
  CHECK(st_arcs == 1);
}

TEST_CASE("empty-target unit schemas have no label or skip-token arcs") {
  for (LossKind kind : kAllKinds) {
    Wfsa schema = build_unit_schema(TargetSequence{}, 3, kind);
    CHECK(schema.num_states() == 2);  // one interior state plus final
    for (const Arc& a : schema.arcs()) {
      CHECK(a.label.unit != skip_token_unit(3));
      CHECK(a.label.unit >= blank_unit(3));
    }
  }
}

TEST_CASE("unit schema rejects reserved ids in the target") {
  TargetSequence bad{{3}};
  CHECK_THROWS_AS(build_unit_schema(bad, 3, LossKind::kRnnt),
                  InvalidTargetError);
}

TEST_CASE("rnnt temporal schema counts for T=2 V=3") {
  Wfsa schema = build_temporal_schema(2, 3, LossKind::kRnnt);
  CHECK(schema.num_states() == 3);
  std::int64_t self_loops = 0, blank_forward = 0;
  for (const Arc& a : schema.arcs()) {
    if (a.src == a.dst) {
      CHECK(a.label.unit < 3);
      ++self_loops;
    } else {
      CHECK(a.label.unit == blank_unit(3));
      CHECK(a.dst == a.src + 1);
      ++blank_forward;
    }
  }
  CHECK(self_loops == 6);
  CHECK(blank_forward == 2);
}

TEST_CASE("star temporal schema adds skip-frame arcs parallel to blanks") {
  Wfsa schema = build_temporal_schema(2, 3, LossKind::kStar);
  std::int64_t sf_arcs = 0;
  for (const Arc& a : schema.arcs()) {
    if (a.label.unit == skip_frame_unit(3)) {
      CHECK(a.dst == a.src + 1);
      ++sf_arcs;
    }
  }
  CHECK(sf_arcs == 2);
}

TEST_CASE("T=1 temporal schema is a single transition into final") {
  for (LossKind kind : kAllKinds) {
    Wfsa schema = build_temporal_schema(1, 2, kind);
    CHECK(schema.num_states() == 2);
    CHECK(schema.final_state() == 1);
    std::int64_t forward = 0;
    for (const Arc& a : schema.arcs()) {
      if (a.src != a.dst) {
        CHECK(a.dst == schema.final_state());
        ++forward;
      }
    }
    CHECK(forward == (has_skip_frame(kind) ? 2 : 1));
  }
}

TEST_CASE("grid state count is T*(U+1)+1 for every kind") {
  for (LossKind kind : kAllKinds) {
    for (std::int32_t frames = 1; frames <= 4; ++frames) {
      for (std::int32_t units = 0; units <= 3; ++units) {
        Wfsa grid = build_grid(ramp_target(units, 2), frames, 2, kind);
        CHECK(grid.num_states() == frames * (units + 1) + 1);
      }
    }
  }
}

TEST_CASE("every rnnt path carries T blanks and U labels") {
  TargetSequence target = ramp_target(2, 3);
  const std::int32_t frames = 3;
  Wfsa grid = build_grid(target, frames, 3, LossKind::kRnnt);
  for (const Path& path : enumerate_paths(grid, 1000)) {
    std::int64_t blanks = 0, labels = 0;
    for (std::int32_t idx : path.arc_indices) {
      const UnitId unit = grid.arcs()[idx].label.unit;
      (unit == blank_unit(3) ? blanks : labels) += 1;
    }
    CHECK(blanks == frames);
    CHECK(labels == target.length());
  }
}

TEST_CASE("trt grid with U=0 has skip-frame but no skip-token arcs") {
  Wfsa grid = build_grid(TargetSequence{}, 3, 2, LossKind::kTrt);
  CHECK(count_unit(grid, skip_frame_unit(2), false) > 0);
  CHECK(count_unit(grid, skip_token_unit(2), false) == 0);
}

TEST_CASE("composition matches the direct grid for all kinds and shapes") {
  for (LossKind kind : kAllKinds) {
    for (std::int32_t frames = 1; frames <= 5; ++frames) {
      for (std::int32_t units = 0; units <= 4; ++units) {
        TargetSequence target = ramp_target(units, 3);
        Wfsa composed = connect(
            compose(build_unit_schema(target, 3, kind),
                    build_temporal_schema(frames, 3, kind)));
        Wfsa grid = build_grid(target, frames, 3, kind);
        CAPTURE(to_string(kind));
        CAPTURE(frames);
        CAPTURE(units);
        CHECK(canonical_equal(composed, grid));
      }
    }
  }
}

TEST_CASE("empty target composed with a T=1 schema is a single blank arc") {
  Wfsa composed = connect(compose(
      build_unit_schema(TargetSequence{}, 2, LossKind::kRnnt),
      build_temporal_schema(1, 2, LossKind::kRnnt)));
  CHECK(composed.num_states() == 2);
  REQUIRE(composed.num_arcs() == 1);
  const Arc& only = composed.arcs()[0];
  CHECK(only.label.unit == blank_unit(2));
  CHECK(only.label.unit_position == 0);
  CHECK(only.label.frame == 0);
}

TEST_CASE("removing the skip arc families recovers the rnnt grid") {
  TargetSequence target = ramp_target(2, 2);
  Wfsa rnnt_grid = build_grid(target, 3, 2, LossKind::kRnnt);

  auto strip = [&](LossKind kind, std::initializer_list<UnitId> drop) {
    Wfsa grid = build_grid(target, 3, 2, kind);
    WfsaBuilder builder(grid.num_states(), grid.final_state());
    for (const Arc& a : grid.arcs()) {
      if (std::find(drop.begin(), drop.end(), a.label.unit) == drop.end()) {
        builder.add_arc(a);
      }
    }
    return std::move(builder).build();
  };

  CHECK(canonical_equal(strip(LossKind::kStar, {skip_frame_unit(2)}),
                        rnnt_grid));
  CHECK(canonical_equal(strip(LossKind::kBypass, {skip_token_unit(2)}),
                        rnnt_grid));
  CHECK(canonical_equal(
      strip(LossKind::kTrt, {skip_frame_unit(2), skip_token_unit(2)}),
      rnnt_grid));
  CHECK(canonical_equal(strip(LossKind::kTrt, {skip_token_unit(2)}),
                        build_grid(target, 3, 2, LossKind::kStar)));
  CHECK(canonical_equal(strip(LossKind::kTrt, {skip_frame_unit(2)}),
                        build_grid(target, 3, 2, LossKind::kBypass)));
}

TEST_CASE("builders are deterministic") {
  TargetSequence target = ramp_target(3, 3);
  for (LossKind kind : kAllKinds) {
    CHECK(to_dot(build_grid(target, 4, 3, kind)) ==
          to_dot(build_grid(target, 4, 3, kind)));
    CHECK(to_dot(build_unit_schema(target, 3, kind)) ==
          to_dot(build_unit_schema(target, 3, kind)));
    CHECK(to_dot(build_temporal_schema(4, 3, kind)) ==
          to_dot(build_temporal_schema(4, 3, kind)));
  }
}
