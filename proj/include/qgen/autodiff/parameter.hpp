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

#include <map>
#include <string>
#include <vector>

#include "qgen/autodiff/tensor.hpp"
#include "qgen/common/rng.hpp"

namespace qgen::ad {

enum class Init {
  kZeros,
  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)) with fan_in = cols.
  kUniformFanIn,
};

struct Parameter {
  std::string name;
  Tensor tensor;
  // Fixed buffers (pretrained word vectors) live in the registry so they are
  // checkpointed, but never receive gradients or optimizer updates.
  bool trainable = true;
};

// Registry of named parameters. Names are unique; insertion order is stable
// and defines checkpoint layout and optimizer iteration order.
class ParameterStore {
 public:
  Tensor add(const std::string& name, Shape shape, Init init, Rng& rng);
  Tensor add_values(const std::string& name, Shape shape, std::vector<Real> values,
                    bool trainable);

  const std::vector<Parameter>& parameters() const { return params_; }
  std::vector<Parameter>& parameters() { return params_; }
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  const Parameter& at(const std::string& name) const;
  Parameter& at(const std::string& name);

  // Releases every gradient buffer, so parameters the next backward pass
  // does not reach stay without a gradient (and the optimizer skips them).
  void zero_grad();
  std::size_t scalar_count(bool trainable_only = true) const;
  // Copy of every trainable gradient, zero-filled where none accumulated.
  std::map<std::string, std::vector<Real>> gradient_map() const;

 private:
  std::vector<Parameter> params_;
  std::map<std::string, std::size_t> index_;
};

double global_grad_norm(const ParameterStore& store);

// Rescales all trainable gradients when their global L2 norm exceeds
// max_norm. Returns the factor applied (1 when unchanged).
double clip_gradients(ParameterStore& store, double max_norm);

}  // namespace qgen::ad
