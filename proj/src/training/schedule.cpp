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

#include "qgen/training/schedule.hpp"

#include <cmath>

namespace qgen::training {

double TeacherForcing::probability(std::size_t step) const {
  return initial * std::pow(decay, static_cast<double>(step));
}

bool PlateauScheduler::observe(double metric) {
  improved_ = !has_best_ || metric > best_;
  if (improved_) {
    best_ = metric;
    has_best_ = true;
    bad_epochs_ = 0;
    since_best_ = 0;
    return false;
  }
  ++since_best_;
  if (++bad_epochs_ >= patience_) {
    lr_ *= factor_;
    bad_epochs_ = 0;
  }
  return since_best_ >= early_stop_;
}

}  // namespace qgen::training
