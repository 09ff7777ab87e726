// core/src/corruption.cc

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

#include "rnntx/corruption.h"

#include "rnntx/error.h"
#include "rnntx/parallel.h"

namespace rnntx {

std::string to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::kDel:
      return "del";
    case CorruptionKind::kSub:
      return "sub";
    case CorruptionKind::kIns:
      return "ins";
    case CorruptionKind::kMixed:
      return "mixed";
  }
  throw Error("to_string: bad CorruptionKind");
}

CorruptionKind corruption_kind_from_string(const std::string& name) {
  if (name == "del") return CorruptionKind::kDel;
  if (name == "sub") return CorruptionKind::kSub;
  if (name == "ins") return CorruptionKind::kIns;
  if (name == "mixed") return CorruptionKind::kMixed;
  throw Error("unknown corruption kind: " + name);
}

void corrupt_deletions(Utterance& utt, double p_m, RandomStream& stream) {
  std::vector<std::string> kept;
  kept.reserve(utt.target_words.size());
  for (std::string& word : utt.target_words) {
    if (!stream.bernoulli(p_m)) kept.push_back(std::move(word));
  }
  utt.target_words = std::move(kept);
}

void corrupt_substitutions(Utterance& utt, double p_m,
                           std::span<const std::string> vocab,
                           RandomStream& stream) {
  if (vocab.empty()) throw Error("corrupt_substitutions: empty vocabulary");
  for (std::string& word : utt.target_words) {
    if (stream.bernoulli(p_m)) {
      word = vocab[stream.uniform_int(vocab.size())];
    }
  }
}

void corrupt_insertions(Utterance& utt, double p_m,
                        std::span<const std::string> vocab,
                        RandomStream& stream) {
  if (vocab.empty()) throw Error("corrupt_insertions: empty vocabulary");
  std::vector<std::string> out;
  out.reserve(utt.target_words.size() + 1);
  for (std::size_t gap = 0; gap <= utt.target_words.size(); ++gap) {
    if (stream.bernoulli(p_m)) {
      out.push_back(vocab[stream.uniform_int(vocab.size())]);
    }
    if (gap < utt.target_words.size()) {
      out.push_back(std::move(utt.target_words[gap]));
    }
  }
  utt.target_words = std::move(out);
}

namespace {

void check_probability(double p, const char* name) {
  if (p < 0.0 || p > 1.0) {
    throw Error(std::string("corrupt: ") + name + " outside [0, 1]");
  }
}

}  // namespace

Corpus corrupt(const Corpus& corpus, const CorruptionSpec& spec,
               std::vector<std::uint8_t>* selected_out, int num_threads) {
  check_probability(spec.word_probability, "word probability");
  check_probability(spec.utterance_fraction, "utterance fraction");
  check_probability(spec.per_type_p, "per-type probability");

  std::vector<std::string> vocab = corpus_vocabulary(corpus);
  Corpus out = corpus;
  if (selected_out != nullptr) selected_out->assign(corpus.size(), 0);

  parallel_for(out.size(), num_threads, [&](std::size_t i) {
    Utterance& utt = out[i];
    const std::uint64_t utt_hash = fnv1a64(utt.id);
    auto stage_stream = [&](std::string_view stage) {
      return RandomStream::derive(spec.seed, stage, utt_hash);
    };

    switch (spec.kind) {
      case CorruptionKind::kDel: {
        RandomStream stream = stage_stream("del");
        corrupt_deletions(utt, spec.word_probability, stream);
        return;
      }
      case CorruptionKind::kSub: {
        RandomStream stream = stage_stream("sub");
        corrupt_substitutions(utt, spec.word_probability, vocab, stream);
        return;
      }
      case CorruptionKind::kIns: {
        RandomStream stream = stage_stream("ins");
        corrupt_insertions(utt, spec.word_probability, vocab, stream);
        return;
      }
      case CorruptionKind::kMixed: {
        RandomStream select = stage_stream("select");
        if (!select.bernoulli(spec.utterance_fraction)) return;
        if (selected_out != nullptr) (*selected_out)[i] = 1;
        auto stage_p = [&](double override_p) {
          return override_p >= 0.0 ? override_p : spec.per_type_p;
        };
        RandomStream del_stream = stage_stream("del");
        corrupt_deletions(utt, stage_p(spec.mixed_del_p), del_stream);
        RandomStream sub_stream = stage_stream("sub");
        corrupt_substitutions(utt, stage_p(spec.mixed_sub_p), vocab,
                              sub_stream);
        RandomStream ins_stream = stage_stream("ins");
        corrupt_insertions(utt, stage_p(spec.mixed_ins_p), vocab, ins_stream);
        return;
      }
    }
  });
  return out;
}

}  // namespace rnntx
