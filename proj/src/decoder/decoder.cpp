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

#include "qgen/decoder/decoder.hpp"

#include "qgen/autodiff/ops.hpp"
#include "qgen/common/error.hpp"

namespace qgen::decoder {

using ad::Tensor;

Decoder::Decoder(ad::ParameterStore& store, const DecoderDims& dims, Tensor embeddings, Rng& rng)
    : dims_(dims), embeddings_(std::move(embeddings)) {
  if (embeddings_.rows() != dims.word_dim || embeddings_.cols() != dims.vocab_size)
    throw ShapeError("decoder: embedding table " + embeddings_.shape().str() + " does not match " +
                     std::to_string(dims.word_dim) + "x" + std::to_string(dims.vocab_size));
  const std::size_t h = dims.hidden, f = dims.memory_dim;
  init_h_w_ = store.add("decoder.init_h.w", {h, dims.graph_dim}, ad::Init::kUniformFanIn, rng);
  init_h_b_ = store.add("decoder.init_h.bias", {h, 1}, ad::Init::kZeros, rng);
  init_c_w_ = store.add("decoder.init_c.w", {h, dims.graph_dim}, ad::Init::kUniformFanIn, rng);
  init_c_b_ = store.add("decoder.init_c.bias", {h, 1}, ad::Init::kZeros, rng);
  lstm_ = layers::LSTMCellParams::create(store, "decoder.lstm", dims.word_dim + f, h, rng);
  attention_ = layers::AttentionParams::create(store, "decoder.attention", f, h, h, true, rng);
  out1_w_ = store.add("decoder.out1.w", {h, h + f}, ad::Init::kUniformFanIn, rng);
  out1_b_ = store.add("decoder.out1.bias", {h, 1}, ad::Init::kZeros, rng);
  out2_w_ = store.add("decoder.out2.w", {dims.vocab_size, h}, ad::Init::kUniformFanIn, rng);
  out2_b_ = store.add("decoder.out2.bias", {dims.vocab_size, 1}, ad::Init::kZeros, rng);
  gen_w_ = store.add("decoder.p_gen.w", {1, f + h + dims.word_dim}, ad::Init::kUniformFanIn, rng);
  gen_b_ = store.add("decoder.p_gen.bias", {1, 1}, ad::Init::kZeros, rng);
}

DecoderState Decoder::init_state(const Tensor& graph_embedding, std::size_t num_nodes) const {
  DecoderState s;
  s.lstm.h = ad::add(ad::matmul(init_h_w_, graph_embedding), init_h_b_);
  s.lstm.c = ad::add(ad::matmul(init_c_w_, graph_embedding), init_c_b_);
  s.context = Tensor::zeros({dims_.memory_dim, 1});
  s.coverage = Tensor::zeros({num_nodes, 1});
  return s;
}

DecodeContext Decoder::prepare(const Tensor& node_states, std::span<const std::size_t> source_ext_ids,
                               std::size_t ext_vocab_size, ad::Mask mask) const {
  if (source_ext_ids.size() != node_states.cols())
    throw ShapeError("decoder: " + std::to_string(source_ext_ids.size()) + " source ids for " +
                     std::to_string(node_states.cols()) + " memory columns");
  if (ext_vocab_size < dims_.vocab_size) throw ShapeError("decoder: extended vocabulary too small");
  for (std::size_t id : source_ext_ids)
    if (id >= ext_vocab_size) throw ShapeError("decoder: source id outside extended vocabulary");
  DecodeContext ctx;
  ctx.memory = layers::prepare_memory(attention_, node_states, std::move(mask));
  ctx.source_ext_ids.assign(source_ext_ids.begin(), source_ext_ids.end());
  ctx.ext_vocab_size = ext_vocab_size;
  return ctx;
}

StepOutput Decoder::step(const DecodeContext& ctx, const DecoderState& state,
                         std::size_t prev_token) const {
  if (prev_token >= ctx.ext_vocab_size) throw ShapeError("decoder: previous token out of range");
  const std::size_t in_vocab = prev_token < dims_.vocab_size ? prev_token : dims_.unk_index;
  Tensor emb = ad::gather_cols(embeddings_, std::span<const std::size_t>(&in_vocab, 1));

  StepOutput out;
  out.next.lstm = layers::lstm_step(lstm_, ad::concat_rows({emb, state.context}), state.lstm);
  const Tensor& s = out.next.lstm.h;

  auto att = layers::additive_attention(attention_, s, ctx.memory, state.coverage);
  out.attention = att.weights;
  out.coverage = state.coverage;
  out.next.context = att.context;
  out.next.coverage = ad::add(state.coverage, att.weights);
  out.next.step = state.step + 1;

  Tensor hidden = ad::add(ad::matmul(out1_w_, ad::concat_rows({s, att.context})), out1_b_);
  Tensor vocab = ad::softmax(ad::add(ad::matmul(out2_w_, hidden), out2_b_), 0);

  if (ctx.forced_p_gen) {
    out.p_gen = Tensor::scalar(*ctx.forced_p_gen);
  } else {
    Tensor gen_in = ad::concat_rows({att.context, s, emb});
    out.p_gen = ad::sigmoid(ad::add(ad::matmul(gen_w_, gen_in), gen_b_));
  }

  Tensor generated = ad::scale_by(vocab, out.p_gen);
  if (ctx.ext_vocab_size > dims_.vocab_size)
    generated = ad::concat_rows(
        {generated, Tensor::zeros({ctx.ext_vocab_size - dims_.vocab_size, 1})});
  Tensor copied = ad::scale_by(
      ad::scatter_add_rows(att.weights, ctx.source_ext_ids, ctx.ext_vocab_size),
      ad::affine(out.p_gen, Real(-1), Real(1)));
  out.distribution = ad::add(generated, copied);
  return out;
}

}  // namespace qgen::decoder
