// core/src/decoder.cc

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

#include "rnntx/decoder.h"

#include "rnntx/error.h"

namespace rnntx {

std::vector<std::int32_t> greedy_decode(const FrameScorer& scorer,
                                        const DecoderBudget& budget,
                                        DecodeStats* stats) {
  if (budget.max_symbols_per_frame < 1) {
    throw Error("greedy_decode: max_symbols_per_frame must be >= 1");
  }
  const std::int32_t blank = scorer.vocab_size();
  std::vector<double> row(blank + 1);
  std::vector<std::int32_t> hypothesis;
  std::int32_t prev = blank;  // blank doubles as <sos>

  for (std::int32_t t = 0; t < scorer.num_frames(); ++t) {
    for (std::int32_t emitted = 0;; ++emitted) {
      if (emitted >= budget.max_symbols_per_frame) {
        if (stats != nullptr) ++stats->cap_hits;
        break;
      }
      scorer.score(t, prev, row);
      std::int32_t best = 0;
      for (std::int32_t v = 1; v <= blank; ++v) {
        if (row[v] > row[best]) best = v;
      }
      if (best == blank) break;
      hypothesis.push_back(best);
      prev = best;
    }
  }
  return hypothesis;
}

}  // namespace rnntx
