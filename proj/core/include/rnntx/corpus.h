// core/include/rnntx/corpus.h

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

#ifndef RNNTX_CORPUS_H_
#define RNNTX_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace rnntx {

// One training example. `true_words` is what was actually spoken (frames are
// always synthesized from it) and is never mutated; corruption touches only
// `target_words`.
struct Utterance {
  std::string id;
  std::vector<std::string> true_words;
  std::vector<std::string> target_words;
};

using Corpus = std::vector<Utterance>;

// JSON-lines files: one {"id": ..., "true_words": [...], "target_words":
// [...]} object per line, UTF-8, fields in that order.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

// Sorted unique true words across the corpus.
std::vector<std::string> corpus_vocabulary(const Corpus& corpus);

// Deterministic synthetic corpus: `num_utterances` utterances of uniform
// length in [min_words, max_words], words drawn uniformly from a vocabulary
// of `vocab_size` generated names; target_words == true_words. Each
// utterance draws from its own derived stream, so num_threads never changes
// the output.
Corpus generate_corpus(std::int32_t vocab_size, std::int64_t num_utterances,
                       std::int32_t min_words, std::int32_t max_words,
                       std::uint64_t seed, int num_threads = 1);

}  // namespace rnntx

#endif  // RNNTX_CORPUS_H_
