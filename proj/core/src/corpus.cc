// core/src/corpus.cc

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

#include "rnntx/corpus.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rnntx/error.h"
#include "rnntx/parallel.h"
#include "rnntx/rng.h"

namespace rnntx {

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    Utterance utt;
    utt.id = record.at("id").get<std::string>();
    utt.true_words = record.at("true_words").get<std::vector<std::string>>();
    utt.target_words =
        record.at("target_words").get<std::vector<std::string>>();
    corpus.push_back(std::move(utt));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file: " + path);
  for (const Utterance& utt : corpus) {
    nlohmann::ordered_json record;
    record["id"] = utt.id;
    record["true_words"] = utt.true_words;
    record["target_words"] = utt.target_words;
    out << record.dump() << "\n";
  }
  if (!out) throw IoError("short write to corpus file: " + path);
}

std::vector<std::string> corpus_vocabulary(const Corpus& corpus) {
  std::set<std::string> words;
  for (const Utterance& utt : corpus) {
    words.insert(utt.true_words.begin(), utt.true_words.end());
  }
  return std::vector<std::string>(words.begin(), words.end());
}

Corpus generate_corpus(std::int32_t vocab_size, std::int64_t num_utterances,
                       std::int32_t min_words, std::int32_t max_words,
                       std::uint64_t seed, int num_threads) {
  if (vocab_size < 1 || min_words < 1 || max_words < min_words ||
      num_utterances < 0) {
    throw Error("generate_corpus: bad parameters");
  }
  std::vector<std::string> vocab(vocab_size);
  for (std::int32_t w = 0; w < vocab_size; ++w) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "w%03d", w);
    vocab[w] = buf;
  }

  Corpus corpus(num_utterances);
  parallel_for(corpus.size(), num_threads, [&](std::size_t i) {
    Utterance& utt = corpus[i];
    char buf[24];
    std::snprintf(buf, sizeof(buf), "utt%06lld", static_cast<long long>(i));
    utt.id = buf;
    RandomStream stream = RandomStream::derive(seed, "gen", fnv1a64(utt.id));
    std::int32_t len =
        min_words +
        static_cast<std::int32_t>(stream.uniform_int(max_words - min_words + 1));
    utt.true_words.reserve(len);
    for (std::int32_t k = 0; k < len; ++k) {
      utt.true_words.push_back(vocab[stream.uniform_int(vocab.size())]);
    }
    utt.target_words = utt.true_words;
  });
  return corpus;
}

}  // namespace rnntx
