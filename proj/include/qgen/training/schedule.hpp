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

#include <cstddef>

#include "qgen/common/rng.hpp"

namespace qgen::training {

// Probability of feeding the gold token: initial * decay^step, where step
// counts optimizer updates over the whole run.
struct TeacherForcing {
  double initial = 0.75;
  double decay = 0.9999;

  double probability(std::size_t step) const;
  bool use_gold(std::size_t step, Rng& rng) const { return rng.bernoulli(probability(step)); }
};

// Learning-rate control from a validation metric (higher is better). After
// `patience` consecutive epochs without a new best the rate is multiplied by
// `factor` and the counter restarts; `early_stop` epochs without a new best
// request a stop.
class PlateauScheduler {
 public:
  PlateauScheduler() = default;
  PlateauScheduler(double lr, double factor, std::size_t patience, std::size_t early_stop)
      : lr_(lr), factor_(factor), patience_(patience), early_stop_(early_stop) {}

  // Records one epoch; returns true when training should stop.
  bool observe(double metric);

  double lr() const { return lr_; }
  double best() const { return best_; }
  bool has_best() const { return has_best_; }
  bool improved() const { return improved_; }
  std::size_t bad_epochs() const { return bad_epochs_; }
  std::size_t epochs_since_best() const { return since_best_; }

  // Restores a saved schedule.
  void restore(double lr, double best, bool has_best, std::size_t bad, std::size_t since) {
    lr_ = lr;
    best_ = best;
    has_best_ = has_best;
    bad_epochs_ = bad;
    since_best_ = since;
  }

 private:
  double lr_ = 1e-3;
  double factor_ = 0.5;
  std::size_t patience_ = 3;
  std::size_t early_stop_ = 10;
  double best_ = 0.0;
  bool has_best_ = false;
  bool improved_ = false;
  std::size_t bad_epochs_ = 0;
  std::size_t since_best_ = 0;
};

}  // namespace qgen::training
