/* Copyright 2026 The qgen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "qgen/alignment/alignment.hpp"

#include <vector>

#include "qgen/autodiff/ops.hpp"
#include "qgen/common/error.hpp"

namespace qgen::alignment {

using ad::Tensor;

SoftAlignResult soft_align(const Tensor& weight, const Tensor& sim_p, const Tensor& sim_a,
                           const Tensor& val_p, const Tensor& val_a) {
  if (sim_a.cols() == 0 || val_a.cols() == 0) throw DataError("soft_align: empty answer");
  if (sim_p.rows() != sim_a.rows())
    throw ShapeError("soft_align: similarity inputs " + sim_p.shape().str() + " and " +
                     sim_a.shape().str() + " differ in feature size");
  if (sim_p.cols() != val_p.cols() || sim_a.cols() != val_a.cols())
    throw ShapeError("soft_align: value inputs do not match similarity inputs");
  Tensor proj_p = ad::relu(ad::matmul(weight, sim_p));
  Tensor proj_a = ad::relu(ad::matmul(weight, sim_a));
  Tensor scores = ad::matmul(ad::transpose(proj_p), proj_a);
  Tensor beta = ad::softmax(scores, 1);
  Tensor aligned = ad::matmul(val_a, ad::transpose(beta));
  return {ad::concat_rows({val_p, aligned}), beta};
}

std::size_t AlignmentDims::word_level_width() const {
  const std::size_t passage_values = word_dim + contextual_dim + feature_dim;
  return enabled ? passage_values + word_dim : passage_values;
}

Tensor DropoutContext::word(const Tensor& t) const {
  if (!training || rng == nullptr) return t;
  return ad::variational_dropout(t, word_rate, true, *rng);
}

Tensor DropoutContext::rnn(const Tensor& t) const {
  if (!training || rng == nullptr) return t;
  return ad::variational_dropout(t, rnn_rate, true, *rng);
}

DeepAlignmentNetwork::DeepAlignmentNetwork(ad::ParameterStore& store, const AlignmentDims& dims,
                                           Rng& rng)
    : dims_(dims) {
  const std::size_t h = dims.bilstm_hidden;
  const std::size_t ctx = dims.contextual_width();
  passage_fwd_ = layers::LSTMCellParams::create(store, "dan.passage_lstm.fwd", dims.word_level_width(), h, rng);
  passage_bwd_ = layers::LSTMCellParams::create(store, "dan.passage_lstm.bwd", dims.word_level_width(), h, rng);
  if (dims.enabled) {
    word_weight_ = store.add("dan.word_align.w", {dims.hidden, dims.word_dim}, ad::Init::kUniformFanIn, rng);
    const std::size_t answer_in = dims.word_dim + dims.contextual_dim;
    answer_fwd_ = layers::LSTMCellParams::create(store, "dan.answer_lstm.fwd", answer_in, h, rng);
    answer_bwd_ = layers::LSTMCellParams::create(store, "dan.answer_lstm.bwd", answer_in, h, rng);
    context_weight_ = store.add("dan.context_align.w",
                                {dims.hidden, dims.word_dim + dims.contextual_dim + ctx},
                                ad::Init::kUniformFanIn, rng);
  }
  const std::size_t final_in = dims.enabled ? 2 * ctx : ctx;
  final_fwd_ = layers::LSTMCellParams::create(store, "dan.final_lstm.fwd", final_in, h, rng);
  final_bwd_ = layers::LSTMCellParams::create(store, "dan.final_lstm.bwd", final_in, h, rng);
}

namespace {

Tensor stack(std::initializer_list<Tensor> parts) {
  std::vector<Tensor> defined;
  for (const auto& p : parts)
    if (p.defined()) defined.push_back(p);
  return ad::concat_rows(defined);
}

}  // namespace

WordLevelOutput DeepAlignmentNetwork::word_level(const AlignmentInputs& in,
                                                 const DropoutContext& dropout) const {
  const bool ctx = dims_.contextual_dim > 0;
  Tensor words_p = dropout.word(in.words_p);
  Tensor features_p = dropout.word(in.features_p);
  Tensor values_p = stack({words_p, ctx ? in.contextual_p : Tensor(), features_p});

  WordLevelOutput out;
  if (dims_.enabled) {
    Tensor words_a = dropout.word(in.words_a);
    auto aligned = soft_align(word_weight_, in.words_p, in.words_a, values_p, words_a);
    out.aligned_p = aligned.output;
    out.beta = aligned.beta;
    Tensor answer_in = stack({words_a, ctx ? in.contextual_a : Tensor()});
    out.context_a = dropout.rnn(
        layers::bilstm_encode(answer_fwd_, answer_bwd_, answer_in, answer_in.cols()));
  } else {
    out.aligned_p = values_p;
  }
  out.context_p = dropout.rnn(
      layers::bilstm_encode(passage_fwd_, passage_bwd_, out.aligned_p, out.aligned_p.cols()));
  return out;
}

SoftAlignResult DeepAlignmentNetwork::contextual_alignment(const AlignmentInputs& in,
                                                           const WordLevelOutput& word) const {
  const bool ctx = dims_.contextual_dim > 0;
  Tensor sim_p = stack({in.words_p, ctx ? in.contextual_p : Tensor(), word.context_p});
  Tensor sim_a = stack({in.words_a, ctx ? in.contextual_a : Tensor(), word.context_a});
  return soft_align(context_weight_, sim_p, sim_a, word.context_p, word.context_a);
}

Tensor DeepAlignmentNetwork::contextual_level(const AlignmentInputs& in, const WordLevelOutput& word,
                                              const DropoutContext& dropout) const {
  Tensor final_in = dims_.enabled ? contextual_alignment(in, word).output : word.context_p;
  return dropout.rnn(layers::bilstm_encode(final_fwd_, final_bwd_, final_in, final_in.cols()));
}

}  // namespace qgen::alignment
