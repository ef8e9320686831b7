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

// Normalised bag of words over the tokens that have a vector.
struct WordMass {
  std::vector<std::string> words;  // distinct, in first-occurrence order
  std::vector<double> mass;        // sums to 1
};

WordMass normalized_bow(std::span<const std::string> tokens, const data::WordVectors& vectors);

// Word Mover's Distance with Euclidean ground cost. Throws DomainError when
// either side has no token with a vector.
double wmd(std::span<const std::string> hypothesis, std::span<const std::string> reference,
           const data::WordVectors& vectors);

// -wmd / |hypothesis|.
double semantic_reward(std::span<const std::string> hypothesis,
                       std::span<const std::string> reference, const data::WordVectors& vectors);

}  // namespace qgen::metrics
