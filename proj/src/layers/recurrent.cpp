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

#include "qgen/layers/recurrent.hpp"

#include <vector>

#include "qgen/autodiff/ops.hpp"
#include "qgen/common/error.hpp"

namespace qgen::layers {

using ad::Tensor;

LSTMCellParams LSTMCellParams::create(ad::ParameterStore& store, const std::string& prefix,
                                      std::size_t input_size, std::size_t hidden_size, Rng& rng) {
  LSTMCellParams p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  p.w_input = store.add(prefix + ".w_input", {4 * hidden_size, input_size}, ad::Init::kUniformFanIn, rng);
  p.w_hidden = store.add(prefix + ".w_hidden", {4 * hidden_size, hidden_size}, ad::Init::kUniformFanIn, rng);
  p.bias = store.add(prefix + ".bias", {4 * hidden_size, 1}, ad::Init::kZeros, rng);
  return p;
}

LstmState LstmState::zeros(std::size_t hidden_size, std::size_t cols) {
  return {Tensor::zeros({hidden_size, cols}), Tensor::zeros({hidden_size, cols})};
}

LstmState lstm_step_projected(const LSTMCellParams& params, const Tensor& input_projection,
                              const LstmState& state) {
  const std::size_t h = params.hidden_size;
  if (input_projection.rows() != 4 * h || state.h.rows() != h || state.c.rows() != h ||
      state.h.cols() != input_projection.cols()) {
    throw ShapeError("lstm_step: projection " + input_projection.shape().str() + " / state " +
                     state.h.shape().str() + " inconsistent with hidden size " + std::to_string(h));
  }
  Tensor pre = ad::add(input_projection, ad::matmul(params.w_hidden, state.h));
  Tensor i = ad::sigmoid(ad::slice_rows(pre, 0, h));
  Tensor f = ad::sigmoid(ad::slice_rows(pre, h, 2 * h));
  Tensor g = ad::tanh(ad::slice_rows(pre, 2 * h, 3 * h));
  Tensor o = ad::sigmoid(ad::slice_rows(pre, 3 * h, 4 * h));
  Tensor c = ad::add(ad::mul(f, state.c), ad::mul(i, g));
  Tensor hn = ad::mul(o, ad::tanh(c));
  return {hn, c};
}

LstmState lstm_step(const LSTMCellParams& params, const Tensor& x, const LstmState& state) {
  if (x.rows() != params.input_size) {
    throw ShapeError("lstm_step: input " + x.shape().str() + " but cell expects " +
                     std::to_string(params.input_size) + " rows");
  }
  Tensor proj = ad::add_column(ad::matmul(params.w_input, x), params.bias);
  return lstm_step_projected(params, proj, state);
}

GRUCellParams GRUCellParams::create(ad::ParameterStore& store, const std::string& prefix,
                                    std::size_t input_size, std::size_t hidden_size, Rng& rng) {
  GRUCellParams p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  p.w_input = store.add(prefix + ".w_input", {3 * hidden_size, input_size}, ad::Init::kUniformFanIn, rng);
  p.w_hidden_gates = store.add(prefix + ".w_hidden_gates", {2 * hidden_size, hidden_size}, ad::Init::kUniformFanIn, rng);
  p.w_hidden_cand = store.add(prefix + ".w_hidden_cand", {hidden_size, hidden_size}, ad::Init::kUniformFanIn, rng);
  p.bias = store.add(prefix + ".bias", {3 * hidden_size, 1}, ad::Init::kZeros, rng);
  return p;
}

Tensor gru_step(const GRUCellParams& params, const Tensor& input, const Tensor& hidden) {
  const std::size_t h = params.hidden_size;
  if (input.rows() != params.input_size || hidden.rows() != h || input.cols() != hidden.cols()) {
    throw ShapeError("gru_step: input " + input.shape().str() + " / hidden " + hidden.shape().str() +
                     " inconsistent with cell " + std::to_string(params.input_size) + "->" +
                     std::to_string(h));
  }
  Tensor x_proj = ad::add_column(ad::matmul(params.w_input, input), params.bias);
  Tensor h_gates = ad::matmul(params.w_hidden_gates, hidden);
  Tensor z = ad::sigmoid(ad::add(ad::slice_rows(x_proj, 0, h), ad::slice_rows(h_gates, 0, h)));
  Tensor r = ad::sigmoid(ad::add(ad::slice_rows(x_proj, h, 2 * h), ad::slice_rows(h_gates, h, 2 * h)));
  Tensor cand = ad::tanh(ad::add(ad::slice_rows(x_proj, 2 * h, 3 * h),
                                 ad::matmul(params.w_hidden_cand, ad::mul(r, hidden))));
  // (1 - z) * h + z * h~  ==  h + z * (h~ - h)
  return ad::add(hidden, ad::mul(z, ad::sub(cand, hidden)));
}

namespace {

std::vector<Tensor> run_direction(const LSTMCellParams& params, const Tensor& sequence,
                                  std::size_t length, bool reverse) {
  Tensor proj = ad::add_column(ad::matmul(params.w_input, ad::slice_cols(sequence, 0, length)),
                               params.bias);
  std::vector<Tensor> states(length);
  LstmState s = LstmState::zeros(params.hidden_size);
  for (std::size_t step = 0; step < length; ++step) {
    const std::size_t t = reverse ? length - 1 - step : step;
    s = lstm_step_projected(params, ad::column(proj, t), s);
    states[t] = s.h;
  }
  return states;
}

}  // namespace

Tensor bilstm_encode(const LSTMCellParams& forward, const LSTMCellParams& backward,
                     const Tensor& sequence, std::size_t length) {
  if (length == 0) throw ShapeError("bilstm_encode: zero-length sequence");
  if (length > sequence.cols()) {
    throw ShapeError("bilstm_encode: length " + std::to_string(length) + " exceeds " +
                     sequence.shape().str());
  }
  if (sequence.rows() != forward.input_size || sequence.rows() != backward.input_size)
    throw ShapeError("bilstm_encode: input " + sequence.shape().str() + " does not match cells");
  auto fwd = run_direction(forward, sequence, length, false);
  auto bwd = run_direction(backward, sequence, length, true);
  Tensor out = ad::concat_rows({ad::concat_cols(fwd), ad::concat_cols(bwd)});
  if (length < sequence.cols()) {
    out = ad::concat_cols(
        {out, Tensor::zeros({forward.hidden_size + backward.hidden_size, sequence.cols() - length})});
  }
  return out;
}

}  // namespace qgen::layers
