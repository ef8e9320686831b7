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

#include "qgen/metrics/bleu.hpp"

#include <cmath>
#include <map>

#include "qgen/common/error.hpp"

namespace qgen::metrics {

namespace {

using Gram = std::vector<std::string>;

std::map<Gram, std::size_t> count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  std::map<Gram, std::size_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[Gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                  tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

}  // namespace

NgramStats& NgramStats::operator+=(const NgramStats& other) {
  for (int n = 0; n < 4; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_length += other.hyp_length;
  ref_length += other.ref_length;
  return *this;
}

NgramStats ngram_stats(std::span<const std::string> hypothesis, std::span<const std::string> reference) {
  NgramStats s;
  s.hyp_length = hypothesis.size();
  s.ref_length = reference.size();
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto hyp = count_ngrams(hypothesis, n);
    const auto ref = count_ngrams(reference, n);
    for (const auto& [gram, count] : hyp) {
      s.totals[n - 1] += count;
      auto it = ref.find(gram);
      if (it != ref.end()) s.matches[n - 1] += std::min(count, it->second);
    }
  }
  return s;
}

double bleu_from_stats(const NgramStats& stats, double epsilon) {
  if (stats.hyp_length == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < 4; ++n) {
    double p = stats.totals[n] == 0 ? 0.0
                                    : static_cast<double>(stats.matches[n]) /
                                          static_cast<double>(stats.totals[n]);
    if (p == 0.0) p = epsilon;
    if (p <= 0.0) return 0.0;
    log_sum += std::log(p);
  }
  const double c = static_cast<double>(stats.hyp_length);
  const double r = static_cast<double>(stats.ref_length);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / 4.0);
}

double bleu4(std::span<const std::string> hypothesis, std::span<const std::string> reference,
             double epsilon) {
  if (reference.empty()) throw DomainError("bleu4: empty reference");
  return bleu_from_stats(ngram_stats(hypothesis, reference), epsilon);
}

double corpus_bleu4(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
                    double epsilon) {
  if (hypotheses.size() != references.size())
    throw DomainError("corpus_bleu4: hypothesis and reference counts differ");
  NgramStats total;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    if (references[i].empty()) throw DomainError("corpus_bleu4: empty reference");
    total += ngram_stats(hypotheses[i], references[i]);
  }
  return bleu_from_stats(total, epsilon);
}

}  // namespace qgen::metrics
