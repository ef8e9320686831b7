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

#include "qgen/autodiff/ops.hpp"
#include "qgen/autodiff/parameter.hpp"
#include "qgen/autodiff/tensor.hpp"

namespace qgen::layers {

// Additive attention with an optional coverage feature:
//   e_i = v . tanh(W_m m_i + W_s s + w_c cov_i + b)
struct AttentionParams {
  ad::Tensor w_memory;    // a x F
  ad::Tensor w_state;     // a x S
  ad::Tensor w_coverage;  // a x 1 (undefined when coverage is off)
  ad::Tensor bias;        // a x 1
  ad::Tensor v;           // 1 x a

  static AttentionParams create(ad::ParameterStore& store, const std::string& prefix,
                                std::size_t memory_size, std::size_t state_size,
                                std::size_t attention_size, bool with_coverage, Rng& rng);
};

// Memory rows projected once per sequence and reused at every step.
struct AttentionMemory {
  ad::Tensor memory;     // F x N
  ad::Tensor projected;  // a x N
  ad::Mask mask;         // N entries, 1 = attendable; empty = all
};

AttentionMemory prepare_memory(const AttentionParams& params, const ad::Tensor& memory,
                               ad::Mask mask = {});

struct AttentionResult {
  ad::Tensor weights;  // N x 1, sums to 1, zero at masked slots
  ad::Tensor context;  // F x 1
};

// `coverage` (N x 1) enters the energy only when both it and w_coverage are
// defined. Throws DomainError when every memory slot is masked.
AttentionResult additive_attention(const AttentionParams& params, const ad::Tensor& state,
                                   const AttentionMemory& memory,
                                   const ad::Tensor& coverage = {});

}  // namespace qgen::layers
