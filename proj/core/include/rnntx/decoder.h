// core/include/rnntx/decoder.h

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

#ifndef RNNTX_DECODER_H_
#define RNNTX_DECODER_H_

#include <cstdint>
#include <span>
#include <vector>

namespace rnntx {

// Scores one utterance for the frame-synchronous decoder. Implementations
// hold the encoded frames; `prev_token` is the last emitted token, with
// blank standing in for start-of-sequence.
class FrameScorer {
 public:
  virtual ~FrameScorer() = default;

  virtual std::int32_t num_frames() const = 0;
  virtual std::int32_t vocab_size() const = 0;  // V; blank id = V

  // Writes V+1 scores (higher = better) for (frame, prev_token) into `out`.
  virtual void score(std::int32_t frame, std::int32_t prev_token,
                     std::span<double> out) const = 0;
};

struct DecoderBudget {
  std::int32_t max_symbols_per_frame = 10;
};

struct DecodeStats {
  std::int64_t cap_hits = 0;  // frames abandoned due to the symbol cap
};

// Greedy decoding: an outer loop over frames with an inner loop emitting
// argmax tokens (ties to the lowest index) until blank or the per-frame cap.
// Blank is never emitted and never fed back as the previous token.
std::vector<std::int32_t> greedy_decode(const FrameScorer& scorer,
                                        const DecoderBudget& budget,
                                        DecodeStats* stats = nullptr);

}  // namespace rnntx

#endif  // RNNTX_DECODER_H_
