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

#include "qgen/metrics/reward.hpp"

#include <cctype>

#include "qgen/common/error.hpp"
#include "qgen/metrics/bleu.hpp"
#include "qgen/metrics/wmd.hpp"

namespace qgen::metrics {

void RewardSpec::validate() const {
  if (!(alpha >= 0.0)) throw ConfigError("reward: alpha must be nonnegative");
  if (!(bleu_epsilon > 0.0)) throw ConfigError("reward: BLEU smoothing epsilon must be positive");
}

std::vector<std::string> lowercased(std::span<const std::string> tokens) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  for (auto& t : out)
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double reward(std::span<const std::string> hypothesis, std::span<const std::string> reference,
              const RewardSpec& spec, const data::WordVectors* vectors) {
  spec.validate();
  std::vector<std::string> hyp(hypothesis.begin(), hypothesis.end());
  std::vector<std::string> ref(reference.begin(), reference.end());
  if (spec.lowercase) {
    hyp = lowercased(hyp);
    ref = lowercased(ref);
  }
  const double bleu = bleu4(hyp, ref, spec.bleu_epsilon);
  if (spec.alpha == 0.0) return bleu;
  if (vectors == nullptr) throw ConfigError("reward: semantic term needs word vectors");
  const WordMass h = normalized_bow(hyp, *vectors);
  const WordMass r = normalized_bow(ref, *vectors);
  const double sem = (h.words.empty() || r.words.empty()) ? spec.undefined_semantic
                                                          : semantic_reward(hyp, ref, *vectors);
  return bleu + spec.alpha * sem;
}

}  // namespace qgen::metrics
