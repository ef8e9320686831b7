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

#include "qgen/autodiff/parameter.hpp"

#include <cmath>

#include "qgen/common/error.hpp"

namespace qgen::ad {

Tensor ParameterStore::add(const std::string& name, Shape shape, Init init, Rng& rng) {
  std::vector<Real> values(shape.size(), Real(0));
  if (init == Init::kUniformFanIn && shape.cols > 0) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(shape.cols));
    for (auto& v : values) v = static_cast<Real>(rng.uniform(-bound, bound));
  }
  return add_values(name, shape, std::move(values), true);
}

Tensor ParameterStore::add_values(const std::string& name, Shape shape,
                                  std::vector<Real> values, bool trainable) {
  if (index_.count(name)) throw ConfigError("duplicate parameter name '" + name + "'");
  Tensor t = Tensor::from(shape, std::move(values), trainable);
  index_[name] = params_.size();
  params_.push_back({name, t, trainable});
  return t;
}

const Parameter& ParameterStore::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConfigError("unknown parameter '" + name + "'");
  return params_[it->second];
}

Parameter& ParameterStore::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConfigError("unknown parameter '" + name + "'");
  return params_[it->second];
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.tensor.clear_grad();
}

std::size_t ParameterStore::scalar_count(bool trainable_only) const {
  std::size_t n = 0;
  for (const auto& p : params_)
    if (p.trainable || !trainable_only) n += p.tensor.size();
  return n;
}

std::map<std::string, std::vector<Real>> ParameterStore::gradient_map() const {
  std::map<std::string, std::vector<Real>> out;
  for (const auto& p : params_) {
    if (!p.trainable) continue;
    auto g = p.tensor.grad();
    if (g.empty()) {
      out[p.name] = std::vector<Real>(p.tensor.size(), Real(0));
    } else {
      out[p.name] = std::vector<Real>(g.begin(), g.end());
    }
  }
  return out;
}

double global_grad_norm(const ParameterStore& store) {
  double sq = 0.0;
  for (const auto& p : store.parameters()) {
    if (!p.trainable) continue;
    for (Real g : p.tensor.grad()) sq += static_cast<double>(g) * static_cast<double>(g);
  }
  return std::sqrt(sq);
}

double clip_gradients(ParameterStore& store, double max_norm) {
  const double norm = global_grad_norm(store);
  if (!(norm > max_norm)) return 1.0;
  const double factor = max_norm / norm;
  for (auto& p : store.parameters()) {
    if (!p.trainable || !p.tensor.has_grad()) continue;
    for (auto& g : p.tensor.mutable_grad()) g = static_cast<Real>(g * factor);
  }
  return factor;
}

}  // namespace qgen::ad
