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

#include "qgen/metrics/wmd.hpp"

#include <cmath>
#include <unordered_map>

#include "qgen/common/error.hpp"
#include "qgen/metrics/transport.hpp"

namespace qgen::metrics {

WordMass normalized_bow(std::span<const std::string> tokens, const data::WordVectors& vectors) {
  WordMass bow;
  std::unordered_map<std::string, std::size_t> slot;
  std::size_t kept = 0;
  for (const auto& t : tokens) {
    if (vectors.find(t) == nullptr) continue;
    ++kept;
    auto [it, fresh] = slot.emplace(t, bow.words.size());
    if (fresh) {
      bow.words.push_back(t);
      bow.mass.push_back(0.0);
    }
    bow.mass[it->second] += 1.0;
  }
  for (double& m : bow.mass) m /= static_cast<double>(kept);
  return bow;
}

double wmd(std::span<const std::string> hypothesis, std::span<const std::string> reference,
           const data::WordVectors& vectors) {
  const WordMass a = normalized_bow(hypothesis, vectors);
  const WordMass b = normalized_bow(reference, vectors);
  if (a.words.empty() || b.words.empty())
    throw DomainError("wmd: a sentence has no token with a word vector");
  std::vector<double> cost(a.words.size() * b.words.size());
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    const auto& u = *vectors.find(a.words[i]);
    for (std::size_t j = 0; j < b.words.size(); ++j) {
      const auto& v = *vectors.find(b.words[j]);
      double d2 = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) d2 += (u[k] - v[k]) * (u[k] - v[k]);
      cost[i * b.words.size() + j] = std::sqrt(d2);
    }
  }
  return solve_transport(a.mass, b.mass, cost).cost;
}

double semantic_reward(std::span<const std::string> hypothesis,
                       std::span<const std::string> reference, const data::WordVectors& vectors) {
  const double d = wmd(hypothesis, reference, vectors);
  return -d / static_cast<double>(hypothesis.size());
}

}  // namespace qgen::metrics
