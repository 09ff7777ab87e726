// core/include/rnntx/corruption.h

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

#ifndef RNNTX_CORRUPTION_H_
#define RNNTX_CORRUPTION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rnntx/corpus.h"
#include "rnntx/rng.h"

namespace rnntx {

enum class CorruptionKind { kDel, kSub, kIns, kMixed };

std::string to_string(CorruptionKind kind);
CorruptionKind corruption_kind_from_string(const std::string& name);

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kDel;
  double word_probability = 0.0;      // p_m for del/sub/ins
  double utterance_fraction = 0.5;    // mixed: chance an utterance is touched
  double per_type_p = 0.15;           // mixed: per-stage word probability
  // Per-stage overrides for mixed; negative means "use per_type_p".
  double mixed_del_p = -1.0;
  double mixed_sub_p = -1.0;
  double mixed_ins_p = -1.0;
  std::uint64_t seed = 0;
};

// Each target word is removed independently with probability p_m.
void corrupt_deletions(Utterance& utt, double p_m, RandomStream& stream);

// Each target word is replaced by a uniform vocabulary draw with
// probability p_m; length is preserved.
void corrupt_substitutions(Utterance& utt, double p_m,
                           std::span<const std::string> vocab,
                           RandomStream& stream);

// One coin per gap (L+1 gaps for L words, including the leading gap); at
// most one uniform vocabulary draw inserted per gap.
void corrupt_insertions(Utterance& utt, double p_m,
                        std::span<const std::string> vocab,
                        RandomStream& stream);

// Applies the spec to a whole corpus. Every stage draws from its own
// per-utterance stream derived from (seed, utterance id, stage name), so
// results do not depend on processing order and mixed corruption with a
// stage disabled degenerates exactly to the single-stage operation.
// Mixed runs deletions, then substitutions, then insertions on utterances
// selected with utterance_fraction. The substitution/insertion vocabulary is
// the corpus' own true-word vocabulary. `selected_out`, when given, records
// which utterances the mixed selection coin picked.
Corpus corrupt(const Corpus& corpus, const CorruptionSpec& spec,
               std::vector<std::uint8_t>* selected_out = nullptr,
               int num_threads = 1);

}  // namespace rnntx

#endif  // RNNTX_CORRUPTION_H_
