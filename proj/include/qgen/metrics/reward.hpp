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
#include <string>
#include <vector>

#include "qgen/data/embeddings.hpp"

namespace qgen::metrics {

struct RewardSpec {
  double alpha = 0.1;              // weight on the semantic term
  double bleu_epsilon = 1e-9;      // zero-precision floor for sentence BLEU
  // Semantic term used when the distance is undefined (empty hypothesis or
  // no token with a vector).
  double undefined_semantic = -1.0;
  bool lowercase = true;

  void validate() const;
};

std::vector<std::string> lowercased(std::span<const std::string> tokens);

// BLEU-4 + alpha * semantic reward. `vectors` may be null only when alpha
// is zero.
double reward(std::span<const std::string> hypothesis, std::span<const std::string> reference,
              const RewardSpec& spec, const data::WordVectors* vectors);

}  // namespace qgen::metrics
