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
#include "qgen/layers/recurrent.hpp"

namespace qgen::alignment {

struct SoftAlignResult {
  ad::Tensor output;  // (Fv_p + Fv_a) x N: passage values stacked over aligned answer values
  ad::Tensor beta;    // N x L, each row a distribution over answer positions
};

// Attention-based soft alignment of answer columns onto passage columns.
//   scores = ReLU(W sim_p)^T ReLU(W sim_a)          (N x L)
//   beta   = row-wise softmax of scores              (over answer positions)
//   output = [val_p ; val_a * beta^T]
// sim_p: F x N, sim_a: F x L, val_p: Fv_p x N, val_a: Fv_a x L, weight: d x F.
// Throws DataError when the answer is empty.
SoftAlignResult soft_align(const ad::Tensor& weight, const ad::Tensor& sim_p,
                           const ad::Tensor& sim_a, const ad::Tensor& val_p,
                           const ad::Tensor& val_a);

struct AlignmentDims {
  std::size_t word_dim = 300;        // pretrained word vectors
  std::size_t feature_dim = 23;      // case + POS + NER embeddings
  std::size_t contextual_dim = 0;    // precomputed contextual vectors; 0 = hook absent
  std::size_t bilstm_hidden = 150;   // per direction; contextual width is twice this
  std::size_t hidden = 300;          // projection width inside the alignment scores
  bool enabled = true;               // false drops both alignment stages

  std::size_t contextual_width() const { return 2 * bilstm_hidden; }
  // Width of the word-level passage matrix fed to the first BiLSTM and to
  // dynamic graph construction.
  std::size_t word_level_width() const;
};

// Per-call dropout settings. Rates apply after embedding lookups (word) and
// after each BiLSTM (rnn); one mask per feature row for the whole sequence.
struct DropoutContext {
  bool training = false;
  Real word_rate = Real(0);
  Real rnn_rate = Real(0);
  Rng* rng = nullptr;

  ad::Tensor word(const ad::Tensor& t) const;
  ad::Tensor rnn(const ad::Tensor& t) const;
};

struct AlignmentInputs {
  ad::Tensor words_p;       // word_dim x N
  ad::Tensor words_a;       // word_dim x L
  ad::Tensor features_p;    // feature_dim x N
  ad::Tensor contextual_p;  // contextual_dim x N (undefined when absent)
  ad::Tensor contextual_a;  // contextual_dim x L
};

struct WordLevelOutput {
  ad::Tensor aligned_p;  // word_level_width x N
  ad::Tensor beta;       // N x L (undefined when alignment is disabled)
  ad::Tensor context_p;  // 2h x N
  ad::Tensor context_a;  // 2h x L (undefined when alignment is disabled)
};

// Answer-aware passage encoder: word-level alignment, passage and answer
// BiLSTMs, contextual-level alignment and a final BiLSTM producing the
// passage matrix X (2h x N).
class DeepAlignmentNetwork {
 public:
  DeepAlignmentNetwork() = default;
  DeepAlignmentNetwork(ad::ParameterStore& store, const AlignmentDims& dims, Rng& rng);

  WordLevelOutput word_level(const AlignmentInputs& in, const DropoutContext& dropout) const;
  SoftAlignResult contextual_alignment(const AlignmentInputs& in, const WordLevelOutput& word) const;
  ad::Tensor contextual_level(const AlignmentInputs& in, const WordLevelOutput& word,
                              const DropoutContext& dropout) const;

  const AlignmentDims& dims() const { return dims_; }
  const ad::Tensor& word_weight() const { return word_weight_; }
  const ad::Tensor& context_weight() const { return context_weight_; }

 private:
  AlignmentDims dims_;
  ad::Tensor word_weight_;     // hidden x word_dim
  ad::Tensor context_weight_;  // hidden x (word_dim + contextual_dim + 2h)
  layers::LSTMCellParams passage_fwd_, passage_bwd_;
  layers::LSTMCellParams answer_fwd_, answer_bwd_;
  layers::LSTMCellParams final_fwd_, final_bwd_;
};

}  // namespace qgen::alignment
