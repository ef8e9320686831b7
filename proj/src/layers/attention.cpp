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

#include "qgen/layers/attention.hpp"

#include "qgen/common/error.hpp"

namespace qgen::layers {

using ad::Tensor;

AttentionParams AttentionParams::create(ad::ParameterStore& store, const std::string& prefix,
                                        std::size_t memory_size, std::size_t state_size,
                                        std::size_t attention_size, bool with_coverage, Rng& rng) {
  AttentionParams p;
  p.w_memory = store.add(prefix + ".w_memory", {attention_size, memory_size}, ad::Init::kUniformFanIn, rng);
  p.w_state = store.add(prefix + ".w_state", {attention_size, state_size}, ad::Init::kUniformFanIn, rng);
  if (with_coverage)
    p.w_coverage = store.add(prefix + ".w_coverage", {attention_size, 1}, ad::Init::kUniformFanIn, rng);
  p.bias = store.add(prefix + ".bias", {attention_size, 1}, ad::Init::kZeros, rng);
  p.v = store.add(prefix + ".v", {1, attention_size}, ad::Init::kUniformFanIn, rng);
  return p;
}

AttentionMemory prepare_memory(const AttentionParams& params, const Tensor& memory, ad::Mask mask) {
  if (!mask.empty() && mask.size() != memory.cols()) {
    throw ShapeError("attention mask has " + std::to_string(mask.size()) + " entries for memory " +
                     memory.shape().str());
  }
  return {memory, ad::matmul(params.w_memory, memory), std::move(mask)};
}

AttentionResult additive_attention(const AttentionParams& params, const Tensor& state,
                                   const AttentionMemory& memory, const Tensor& coverage) {
  const std::size_t n = memory.memory.cols();
  if (n == 0) throw DomainError("attention over empty memory");
  Tensor state_term = ad::add_column(ad::matmul(params.w_state, state), params.bias);
  Tensor energy_in = ad::add_column(memory.projected, state_term);
  if (coverage.defined() && params.w_coverage.defined()) {
    if (coverage.rows() != n || coverage.cols() != 1)
      throw ShapeError("coverage " + coverage.shape().str() + " does not match memory of " + std::to_string(n));
    energy_in = ad::add(energy_in, ad::matmul(params.w_coverage, ad::transpose(coverage)));
  }
  Tensor energy = ad::matmul(params.v, ad::tanh(energy_in));  // 1 x N
  Tensor weights_row = ad::softmax(energy, 1, memory.mask);
  Tensor weights = ad::transpose(weights_row);
  Tensor context = ad::matmul(memory.memory, weights);
  return {weights, context};
}

}  // namespace qgen::layers
