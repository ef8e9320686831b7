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

#include <span>

#include "qgen/autodiff/tensor.hpp"
#include "qgen/decoder/decoder.hpp"

namespace qgen::training {

inline constexpr Real kProbabilityFloor = Real(1e-12);

// sum_t [ -log max(P_t(gold_t), 1e-12) + lambda * sum_i min(a_i^t, cov_i^t) ]
// over the decoder steps; gold has one extended index per step.
ad::Tensor xent_coverage_loss(std::span<const decoder::StepOutput> steps,
                              std::span<const std::size_t> gold, Real lambda);

// (baseline_reward - sample_reward) * sum_logprob. The reward difference
// is a constant; when rewards tie the gradient is exactly zero.
ad::Tensor scst_loss(double baseline_reward, double sample_reward, const ad::Tensor& sum_logprob);

// gamma * rl + (1 - gamma) * lm. Throws DomainError for gamma outside [0, 1].
ad::Tensor mixed_loss(const ad::Tensor& rl, const ad::Tensor& lm, Real gamma);

}  // namespace qgen::training
