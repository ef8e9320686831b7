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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgen/autodiff/parameter.hpp"
#include "qgen/autodiff/tensor.hpp"
#include "qgen/layers/attention.hpp"
#include "qgen/layers/recurrent.hpp"

namespace qgen::decoder {

struct DecoderDims {
  std::size_t word_dim = 300;    // decoder input embedding width
  std::size_t hidden = 300;      // LSTM state width
  std::size_t memory_dim = 300;  // node embedding width
  std::size_t graph_dim = 300;   // pooled graph vector width
  std::size_t vocab_size = 0;    // base output vocabulary
  std::size_t unk_index = 1;
};

struct DecoderState {
  layers::LstmState lstm;  // s_t, c_t
  ad::Tensor context;      // h*_t, memory_dim x 1 (zero before the first step)
  ad::Tensor coverage;     // N x 1, running sum of past attention
  std::size_t step = 0;
};

// Per-sequence constants for decoding one passage.
struct DecodeContext {
  layers::AttentionMemory memory;
  std::vector<std::size_t> source_ext_ids;  // one per memory column
  std::size_t ext_vocab_size = 0;
  // Test hook: pins the generation switch instead of computing it.
  std::optional<Real> forced_p_gen;
};

struct StepOutput {
  ad::Tensor distribution;  // ext_vocab_size x 1
  ad::Tensor attention;     // N x 1
  ad::Tensor coverage;      // N x 1, coverage seen by this step's attention
  ad::Tensor p_gen;         // 1 x 1
  DecoderState next;
};

// LSTM decoder with input feeding, coverage attention over node embeddings
// and a pointer-generator output over the extended vocabulary.
class Decoder {
 public:
  Decoder() = default;
  // `embeddings` is word_dim x vocab_size and is used as-is for input tokens.
  Decoder(ad::ParameterStore& store, const DecoderDims& dims, ad::Tensor embeddings, Rng& rng);

  DecoderState init_state(const ad::Tensor& graph_embedding, std::size_t num_nodes) const;
  DecodeContext prepare(const ad::Tensor& node_states, std::span<const std::size_t> source_ext_ids,
                        std::size_t ext_vocab_size, ad::Mask mask = {}) const;
  // Previous token is an extended index; ids outside the base vocabulary
  // are read through the UNK embedding.
  StepOutput step(const DecodeContext& ctx, const DecoderState& state, std::size_t prev_token) const;

  const DecoderDims& dims() const { return dims_; }

 private:
  DecoderDims dims_;
  ad::Tensor embeddings_;
  ad::Tensor init_h_w_, init_h_b_, init_c_w_, init_c_b_;
  layers::LSTMCellParams lstm_;
  layers::AttentionParams attention_;
  ad::Tensor out1_w_, out1_b_;  // hidden x (hidden + memory_dim)
  ad::Tensor out2_w_, out2_b_;  // vocab x hidden
  ad::Tensor gen_w_, gen_b_;    // 1 x (memory_dim + hidden + word_dim)
};

}  // namespace qgen::decoder
