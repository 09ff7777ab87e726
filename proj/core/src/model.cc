// core/src/model.cc

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

#include "rnntx/model.h"

#include <algorithm>
#include <bit>
#include <fstream>

#include "json.hpp"
#include "rnntx/error.h"
#include "rnntx/rng.h"

namespace rnntx {

SynthesisSpec make_synthesis_spec(const Corpus& corpus, std::uint64_t seed) {
  SynthesisSpec spec;
  spec.vocab = corpus_vocabulary(corpus);
  spec.seed = seed;
  return spec;
}

FrameSynthesizer::FrameSynthesizer(SynthesisSpec spec)
    : spec_(std::move(spec)) {
  if (spec_.vocab.empty() || spec_.frames_per_word < 1 ||
      spec_.feature_dim < 1) {
    throw Error("FrameSynthesizer: bad synthesis spec");
  }
  const std::int64_t rows =
      static_cast<std::int64_t>(spec_.vocab.size()) * spec_.frames_per_word;
  codebook_.resize(rows, spec_.feature_dim);
  RandomStream stream = RandomStream::derive(spec_.seed, "codebook");
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int32_t c = 0; c < spec_.feature_dim; ++c) {
      codebook_(r, c) = stream.normal();
    }
  }
}

std::vector<UnitId> FrameSynthesizer::word_ids(
    std::span<const std::string> words) const {
  std::vector<UnitId> ids;
  ids.reserve(words.size());
  for (const std::string& word : words) {
    auto it = std::lower_bound(spec_.vocab.begin(), spec_.vocab.end(), word);
    if (it == spec_.vocab.end() || *it != word) {
      throw InvalidTargetError("word not in vocabulary: " + word);
    }
    ids.push_back(static_cast<UnitId>(it - spec_.vocab.begin()));
  }
  return ids;
}

RowMatrix FrameSynthesizer::frames(const Utterance& utt) const {
  std::vector<UnitId> ids = word_ids(utt.true_words);
  const std::int32_t k = spec_.frames_per_word;
  RowMatrix out(static_cast<std::int64_t>(ids.size()) * k, spec_.feature_dim);
  for (std::size_t w = 0; w < ids.size(); ++w) {
    out.middleRows(static_cast<std::int64_t>(w) * k, k) =
        codebook_.middleRows(static_cast<std::int64_t>(ids[w]) * k, k);
  }
  if (spec_.noise_std > 0.0) {
    RandomStream stream =
        RandomStream::derive(spec_.seed, "noise", fnv1a64(utt.id));
    for (std::int64_t r = 0; r < out.rows(); ++r) {
      for (std::int32_t c = 0; c < spec_.feature_dim; ++c) {
        out(r, c) += spec_.noise_std * stream.normal();
      }
    }
  }
  return out;
}

std::int64_t ToyModelParams::parameter_count() const {
  return encoder_weight.size() + encoder_bias.size() + embeddings.size() +
         joint_weight.size() + joint_bias.size();
}

ToyModelParams init_params(std::int32_t vocab_size, std::int32_t feature_dim,
                           std::int32_t hidden_dim, std::uint64_t seed) {
  ToyModelParams p;
  p.encoder_weight.resize(hidden_dim, feature_dim);
  p.encoder_bias = Eigen::VectorXd::Zero(hidden_dim);
  p.embeddings.resize(vocab_size + 1, hidden_dim);
  p.joint_weight.resize(vocab_size + 1, hidden_dim);
  p.joint_bias = Eigen::VectorXd::Zero(vocab_size + 1);

  RandomStream stream = RandomStream::derive(seed, "params");
  auto fill = [&](RowMatrix& m) {
    for (std::int64_t r = 0; r < m.rows(); ++r) {
      for (std::int64_t c = 0; c < m.cols(); ++c) {
        m(r, c) = 0.1 * stream.normal();
      }
    }
  };
  fill(p.encoder_weight);
  fill(p.embeddings);
  fill(p.joint_weight);
  return p;
}

ToyModelGrads zero_grads(const ToyModelParams& params) {
  ToyModelGrads g;
  g.encoder_weight = RowMatrix::Zero(params.encoder_weight.rows(),
                                     params.encoder_weight.cols());
  g.encoder_bias = Eigen::VectorXd::Zero(params.encoder_bias.size());
  g.embeddings =
      RowMatrix::Zero(params.embeddings.rows(), params.embeddings.cols());
  g.joint_weight =
      RowMatrix::Zero(params.joint_weight.rows(), params.joint_weight.cols());
  g.joint_bias = Eigen::VectorXd::Zero(params.joint_bias.size());
  return g;
}

JointLogProbs forward_joint(const ToyModelParams& params,
                            const RowMatrix& frames,
                            const TargetSequence& target,
                            ForwardCache* cache) {
  const std::int32_t num_frames = static_cast<std::int32_t>(frames.rows());
  const std::int32_t num_units = target.length();
  const std::int32_t vocab_size = params.vocab_size();
  const std::int32_t hidden = params.hidden_dim();
  if (frames.cols() != params.feature_dim()) {
    throw ShapeMismatchError("forward_joint: feature dim mismatch");
  }
  validate_target(target, vocab_size);

  RowMatrix encoder_out =
      ((frames * params.encoder_weight.transpose()).rowwise() +
       params.encoder_bias.transpose())
          .cwiseMax(0.0);

  // Predictor rows: blank as <sos>, then the target prefix tokens.
  RowMatrix predictor_out(num_units + 1, hidden);
  predictor_out.row(0) = params.embeddings.row(vocab_size);
  for (std::int32_t u = 0; u < num_units; ++u) {
    predictor_out.row(u + 1) = params.embeddings.row(target.units[u]);
  }

  RowMatrix fused(static_cast<std::int64_t>(num_frames) * (num_units + 1),
                  hidden);
  for (std::int32_t t = 0; t < num_frames; ++t) {
    for (std::int32_t u = 0; u <= num_units; ++u) {
      fused.row(static_cast<std::int64_t>(t) * (num_units + 1) + u) =
          (encoder_out.row(t) + predictor_out.row(u)).cwiseMax(0.0);
    }
  }

  RowMatrix logits = (fused * params.joint_weight.transpose()).rowwise() +
                     params.joint_bias.transpose();

  JointLogProbs joint(num_frames, num_units, vocab_size);
  for (std::int64_t cell = 0; cell < logits.rows(); ++cell) {
    double max_logit = logits.row(cell).maxCoeff();
    double z = 0.0;
    for (std::int32_t v = 0; v <= vocab_size; ++v) {
      z += std::exp(logits(cell, v) - max_logit);
    }
    const double log_z = max_logit + std::log(z);
    double* row = joint.flat().data() + cell * (vocab_size + 1);
    for (std::int32_t v = 0; v <= vocab_size; ++v) {
      row[v] = logits(cell, v) - log_z;
    }
  }

  if (cache != nullptr) {
    cache->encoder_out = std::move(encoder_out);
    cache->fused = std::move(fused);
  }
  return joint;
}

void backward_params(const ToyModelParams& params, const RowMatrix& frames,
                     const TargetSequence& target, const JointLogProbs& joint,
                     const ForwardCache& cache, const JointLogProbs& joint_grad,
                     ToyModelGrads& grads) {
  const std::int32_t num_frames = joint.num_frames();
  const std::int32_t num_units = joint.num_units();
  const std::int32_t vocab_size = joint.vocab_size();
  const std::int64_t cells =
      static_cast<std::int64_t>(num_frames) * (num_units + 1);

  Eigen::Map<const RowMatrix> logp(joint.flat().data(), cells, vocab_size + 1);
  Eigen::Map<const RowMatrix> grad_logp(joint_grad.flat().data(), cells,
                                        vocab_size + 1);

  // Through the log-softmax: d/dlogit = g - softmax * rowsum(g).
  Eigen::VectorXd row_sums = grad_logp.rowwise().sum();
  RowMatrix delta_logits =
      grad_logp - (logp.array().exp().colwise() * row_sums.array()).matrix();

  grads.joint_weight.noalias() += delta_logits.transpose() * cache.fused;
  grads.joint_bias.noalias() += delta_logits.colwise().sum().transpose();

  RowMatrix delta_fused = delta_logits * params.joint_weight;
  delta_fused.array() *= (cache.fused.array() > 0.0).cast<double>();

  RowMatrix delta_encoder = RowMatrix::Zero(num_frames, params.hidden_dim());
  RowMatrix delta_predictor =
      RowMatrix::Zero(num_units + 1, params.hidden_dim());
  for (std::int32_t t = 0; t < num_frames; ++t) {
    for (std::int32_t u = 0; u <= num_units; ++u) {
      const auto row =
          delta_fused.row(static_cast<std::int64_t>(t) * (num_units + 1) + u);
      delta_encoder.row(t) += row;
      delta_predictor.row(u) += row;
    }
  }

  delta_encoder.array() *= (cache.encoder_out.array() > 0.0).cast<double>();
  grads.encoder_weight.noalias() += delta_encoder.transpose() * frames;
  grads.encoder_bias.noalias() += delta_encoder.colwise().sum().transpose();

  grads.embeddings.row(vocab_size) += delta_predictor.row(0);
  for (std::int32_t u = 0; u < num_units; ++u) {
    grads.embeddings.row(target.units[u]) += delta_predictor.row(u + 1);
  }
}

ToyFrameScorer::ToyFrameScorer(const ToyModelParams& params,
                               const RowMatrix& frames)
    : params_(params),
      encoded_(((frames * params.encoder_weight.transpose()).rowwise() +
                params.encoder_bias.transpose())
                   .cwiseMax(0.0)) {}

void ToyFrameScorer::score(std::int32_t frame, std::int32_t prev_token,
                           std::span<double> out) const {
  Eigen::VectorXd fused = (encoded_.row(frame).transpose() +
                           params_.embeddings.row(prev_token).transpose())
                              .cwiseMax(0.0);
  Eigen::VectorXd logits = params_.joint_weight * fused + params_.joint_bias;
  std::copy(logits.data(), logits.data() + logits.size(), out.begin());
}

namespace {

void append_tensor(nlohmann::ordered_json& tensors, const char* name,
                   std::initializer_list<std::int64_t> shape) {
  nlohmann::ordered_json t;
  t["name"] = name;
  t["shape"] = std::vector<std::int64_t>(shape);
  tensors.push_back(t);
}

void write_doubles(std::ofstream& out, const double* data, std::int64_t n) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint writer assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::ifstream& in, double* data, std::int64_t n) {
  in.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw IoError("checkpoint truncated");
}

}  // namespace

void save_checkpoint(const std::string& path, const ToyModelParams& params,
                     const SynthesisSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path);

  const std::int64_t h = params.hidden_dim();
  const std::int64_t d = params.feature_dim();
  const std::int64_t labels = params.vocab_size() + 1;

  nlohmann::ordered_json header;
  header["format"] = "rnntx-toy-checkpoint";
  header["version"] = 1;
  header["vocab"] = spec.vocab;
  header["frames_per_word"] = spec.frames_per_word;
  header["feature_dim"] = spec.feature_dim;
  header["noise_std"] = spec.noise_std;
  header["synthesis_seed"] = spec.seed;
  header["hidden_dim"] = h;
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  append_tensor(tensors, "encoder_weight", {h, d});
  append_tensor(tensors, "encoder_bias", {h});
  append_tensor(tensors, "embeddings", {labels, h});
  append_tensor(tensors, "joint_weight", {labels, h});
  append_tensor(tensors, "joint_bias", {labels});
  header["tensors"] = tensors;
  out << header.dump() << "\n";

  write_doubles(out, params.encoder_weight.data(),
                params.encoder_weight.size());
  write_doubles(out, params.encoder_bias.data(), params.encoder_bias.size());
  write_doubles(out, params.embeddings.data(), params.embeddings.size());
  write_doubles(out, params.joint_weight.data(), params.joint_weight.size());
  write_doubles(out, params.joint_bias.data(), params.joint_bias.size());
  if (!out) throw IoError("short write to checkpoint: " + path);
}

ToyCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw IoError("checkpoint has no header: " + path);
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad checkpoint header: ") + e.what());
  }
  if (header.value("format", "") != "rnntx-toy-checkpoint") {
    throw IoError("not a toy checkpoint: " + path);
  }

  ToyCheckpoint ckpt;
  ckpt.spec.vocab = header.at("vocab").get<std::vector<std::string>>();
  ckpt.spec.frames_per_word = header.at("frames_per_word").get<std::int32_t>();
  ckpt.spec.feature_dim = header.at("feature_dim").get<std::int32_t>();
  ckpt.spec.noise_std = header.at("noise_std").get<double>();
  ckpt.spec.seed = header.at("synthesis_seed").get<std::uint64_t>();

  const std::int64_t h = header.at("hidden_dim").get<std::int64_t>();
  const std::int64_t d = ckpt.spec.feature_dim;
  const std::int64_t labels =
      static_cast<std::int64_t>(ckpt.spec.vocab.size()) + 1;

  ToyModelParams& p = ckpt.params;
  p.encoder_weight.resize(h, d);
  p.encoder_bias.resize(h);
  p.embeddings.resize(labels, h);
  p.joint_weight.resize(labels, h);
  p.joint_bias.resize(labels);
  read_doubles(in, p.encoder_weight.data(), p.encoder_weight.size());
  read_doubles(in, p.encoder_bias.data(), p.encoder_bias.size());
  read_doubles(in, p.embeddings.data(), p.embeddings.size());
  read_doubles(in, p.joint_weight.data(), p.joint_weight.size());
  read_doubles(in, p.joint_bias.data(), p.joint_bias.size());
  return ckpt;
}

}  // namespace rnntx
