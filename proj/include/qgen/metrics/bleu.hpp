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

namespace qgen::metrics {

using Tokens = std::vector<std::string>;

// Clipped n-gram match statistics for one hypothesis/reference pair.
struct NgramStats {
  std::size_t matches[4] = {0, 0, 0, 0};
  std::size_t totals[4] = {0, 0, 0, 0};
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;

  NgramStats& operator+=(const NgramStats& other);
};

NgramStats ngram_stats(std::span<const std::string> hypothesis, std::span<const std::string> reference);

// Geometric mean of the four modified precisions times the brevity penalty.
// A zero precision is replaced by `epsilon`. Empty hypotheses score 0.
double bleu_from_stats(const NgramStats& stats, double epsilon);

// Sentence-level BLEU-4. Throws DomainError on an empty reference.
double bleu4(std::span<const std::string> hypothesis, std::span<const std::string> reference,
             double epsilon = 1e-9);

// Corpus-level BLEU-4: statistics are pooled before the precisions are taken.
double corpus_bleu4(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
                    double epsilon = 1e-9);

}  // namespace qgen::metrics
