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

#pragma once

#include <string>

#include "qgen/autodiff/parameter.hpp"
#include "qgen/autodiff/tensor.hpp"
#include "qgen/common/rng.hpp"

namespace qgen::layers {

// Gate rows are stacked [input; forget; candidate; output].
struct LSTMCellParams {
  ad::Tensor w_input;   // 4h x in
  ad::Tensor w_hidden;  // 4h x h
  ad::Tensor bias;      // 4h x 1
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;

  static LSTMCellParams create(ad::ParameterStore& store, const std::string& prefix,
                               std::size_t input_size, std::size_t hidden_size, Rng& rng);
};

struct LstmState {
  ad::Tensor h;
  ad::Tensor c;

  static LstmState zeros(std::size_t hidden_size, std::size_t cols = 1);
};

// One LSTM update. x is in x k for k independent columns.
LstmState lstm_step(const LSTMCellParams& params, const ad::Tensor& x, const LstmState& state);
// Same update with W_x * x + b already computed (4h x k).
LstmState lstm_step_projected(const LSTMCellParams& params, const ad::Tensor& input_projection,
                              const LstmState& state);

// Rows stacked [update z; reset r; candidate]. Update follows
//   z  = sigmoid(Wz x + Uz h + bz)
//   r  = sigmoid(Wr x + Ur h + br)
//   h~ = tanh(Wc x + Uc (r * h) + bc)
//   h' = (1 - z) * h + z * h~
struct GRUCellParams {
  ad::Tensor w_input;         // 3h x in
  ad::Tensor w_hidden_gates;  // 2h x h
  ad::Tensor w_hidden_cand;   // h x h
  ad::Tensor bias;            // 3h x 1
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;

  static GRUCellParams create(ad::ParameterStore& store, const std::string& prefix,
                              std::size_t input_size, std::size_t hidden_size, Rng& rng);
};

// input is in x k, hidden is h x k; columns are independent.
ad::Tensor gru_step(const GRUCellParams& params, const ad::Tensor& input, const ad::Tensor& hidden);

// Runs a forward and a backward LSTM over the first `length` columns of
// `sequence` (in x P) and stacks their states: output is 2h x P with
// [forward; backward] per column and exact zeros for columns >= length.
ad::Tensor bilstm_encode(const LSTMCellParams& forward, const LSTMCellParams& backward,
                         const ad::Tensor& sequence, std::size_t length);

}  // namespace qgen::layers
