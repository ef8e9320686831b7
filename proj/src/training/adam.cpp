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

#include "qgen/training/adam.hpp"

#include <cmath>

namespace qgen::training {

void Adam::step(ad::ParameterStore& store, double lr) {
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  for (auto& p : store.parameters()) {
    if (!p.trainable || !p.tensor.has_grad()) continue;
    auto values = p.tensor.mutable_values();
    const auto grad = p.tensor.grad();
    auto& m = m_[p.name];
    auto& v = v_[p.name];
    if (m.size() != values.size()) m.assign(values.size(), Real(0));
    if (v.size() != values.size()) v.assign(values.size(), Real(0));
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grad[i];
      const double mi = beta1_ * m[i] + (1.0 - beta1_) * g;
      const double vi = beta2_ * v[i] + (1.0 - beta2_) * g * g;
      m[i] = static_cast<Real>(mi);
      v[i] = static_cast<Real>(vi);
      values[i] -= static_cast<Real>(lr * (mi / c1) / (std::sqrt(vi / c2) + epsilon_));
    }
  }
}

void Adam::reset() {
  steps_ = 0;
  m_.clear();
  v_.clear();
}

}  // namespace qgen::training
