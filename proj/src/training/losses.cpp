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

#include "qgen/training/losses.hpp"

#include "qgen/autodiff/ops.hpp"
#include "qgen/common/error.hpp"

namespace qgen::training {

using ad::Tensor;

Tensor xent_coverage_loss(std::span<const decoder::StepOutput> steps,
                          std::span<const std::size_t> gold, Real lambda) {
  if (steps.size() != gold.size())
    throw ShapeError("xent_coverage_loss: " + std::to_string(steps.size()) + " steps for " +
                     std::to_string(gold.size()) + " gold tokens");
  if (steps.empty()) throw ShapeError("xent_coverage_loss: no steps");
  Tensor total;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const auto& s = steps[t];
    if (gold[t] >= s.distribution.rows())
      throw ShapeError("xent_coverage_loss: gold index outside the distribution");
    Tensor nll = ad::scale(ad::log(ad::clamp_min(ad::pick(s.distribution, gold[t], 0), kProbabilityFloor)),
                           Real(-1));
    Tensor term = nll;
    if (lambda != Real(0)) {
      Tensor cov = ad::sum(ad::minimum(s.attention, s.coverage));
      term = ad::add(nll, ad::scale(cov, lambda));
    }
    total = total.defined() ? ad::add(total, term) : term;
  }
  return total;
}

Tensor scst_loss(double baseline_reward, double sample_reward, const Tensor& sum_logprob) {
  return ad::scale(sum_logprob, static_cast<Real>(baseline_reward - sample_reward));
}

Tensor mixed_loss(const Tensor& rl, const Tensor& lm, Real gamma) {
  if (!(gamma >= Real(0) && gamma <= Real(1))) throw DomainError("mixed_loss: gamma outside [0, 1]");
  return ad::add(ad::scale(rl, gamma), ad::scale(lm, Real(1) - gamma));
}

}  // namespace qgen::training
