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

#include "qgen/autodiff/parameter.hpp"

namespace qgen::training {

// Adam with bias correction. Moments are keyed by parameter name and created
// on first use; non-trainable parameters are skipped.
class Adam {
 public:
  explicit Adam(double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8)
      : beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

  void step(ad::ParameterStore& store, double lr);
  void reset();

  std::size_t steps() const { return steps_; }
  void set_steps(std::size_t t) { steps_ = t; }
  std::map<std::string, std::vector<Real>>& first_moments() { return m_; }
  std::map<std::string, std::vector<Real>>& second_moments() { return v_; }
  const std::map<std::string, std::vector<Real>>& first_moments() const { return m_; }
  const std::map<std::string, std::vector<Real>>& second_moments() const { return v_; }

 private:
  double beta1_, beta2_, epsilon_;
  std::size_t steps_ = 0;
  std::map<std::string, std::vector<Real>> m_, v_;
};

}  // namespace qgen::training
