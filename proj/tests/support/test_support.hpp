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

// Shared helpers for unit and acceptance tests: a central-difference
// gradient checker and small random corpora and models.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qgen/autodiff/ops.hpp"
#include "qgen/autodiff/tape.hpp"
#include "qgen/autodiff/tensor.hpp"
#include "qgen/common/rng.hpp"
#include "qgen/data/embeddings.hpp"
#include "qgen/data/example.hpp"
#include "qgen/data/vocab.hpp"
#include "qgen/model/config.hpp"
#include "qgen/model/graph2seq.hpp"

namespace qgen::testing {

struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // coordinates where fn is not differentiable at any tried step
  std::string worst;  // "input#i[j]: analytic a vs numeric n"
};

// Relative error |a - n| / max(|a|, |n|), with the denominator floored at
// `floor` so that entries whose true gradient is zero are judged absolutely.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  const double denom = std::max({std::fabs(analytic), std::fabs(numeric), floor});
  return std::fabs(analytic - numeric) / denom;
}

inline std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Five-point central difference of fn along one coordinate. `jump` is the
// largest change between adjacent one-sided slopes, which stays near
// eps * f'' for smooth fn and blows up when the stencil straddles a
// discontinuity such as a top-k selection flip.
struct Stencil {
  double derivative = 0.0;
  double jump = 0.0;
};

inline Stencil five_point(const std::function<ad::Tensor()>& fn, Real& x, double eps) {
  const Real saved = x;
  double f[5];
  {
    ad::NoGradGuard guard;
    const double offsets[5] = {-2 * eps, -eps, 0.0, eps, 2 * eps};
    for (int o = 0; o < 5; ++o) {
      x = saved + static_cast<Real>(offsets[o]);
      f[o] = fn().item();
    }
  }
  x = saved;
  Stencil s;
  s.derivative = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * eps);
  for (int o = 0; o + 2 < 5; ++o)
    s.jump = std::max(s.jump, std::fabs((f[o + 2] - 2 * f[o + 1] + f[o]) / eps));
  return s;
}

// Compares reverse-mode gradients of the scalar fn() with respect to every
// entry of `inputs` against central differences; fn must rebuild the graph
// from the current input values on every call. Coordinates
// where fn is not smooth at step eps are retried with the step halved, down to eps / 100;
// if that still straddles a discontinuity they are counted in `skipped`.
inline GradCheckResult grad_check(const std::function<ad::Tensor()>& fn, std::vector<ad::Tensor> inputs,
                                  double eps = 1e-4, std::size_t max_entries_per_input = 0) {
  for (auto& t : inputs) t.zero_grad();
  ad::Tensor loss = fn();
  ad::backward(loss);
  std::vector<std::vector<Real>> analytic;
  for (auto& t : inputs) {
    if (t.has_grad())
      analytic.emplace_back(t.grad().begin(), t.grad().end());
    else
      analytic.emplace_back(t.size(), Real(0));
  }
  GradCheckResult r;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    auto values = inputs[k].mutable_values();
    const std::size_t n = values.size();
    const std::size_t stride =
        max_entries_per_input == 0 || n <= max_entries_per_input ? 1 : n / max_entries_per_input;
    for (std::size_t j = 0; j < n; j += stride) {
      auto smooth = [](const Stencil& s) { return s.jump <= 1e-3 * (1.0 + std::fabs(s.derivative)); };
      double h = eps;
      Stencil st = five_point(fn, values[j], h);
      while (!smooth(st) && h > eps / 100) st = five_point(fn, values[j], h /= 2);
      if (!smooth(st)) {
        ++r.skipped;
        continue;
      }
      const double numeric = st.derivative;
      const double a = analytic[k][j];
      // rounding noise in the difference grows as the step shrinks
      const double rel = relative_error(a, numeric, 1e-6 * eps / h);
      r.max_abs_error = std::max(r.max_abs_error, std::fabs(a - numeric));
      if (rel > r.max_rel_error) {
        r.max_rel_error = rel;
        r.worst = "input#" + std::to_string(k) + "[" + std::to_string(j) + "]: analytic " +
                  format_g(a) + " vs numeric " + format_g(numeric);
      }
      ++r.checked;
    }
  }
  return r;
}

inline ad::Tensor random_tensor(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0,
                                bool requires_grad = true) {
  std::vector<Real> v(rows * cols);
  for (auto& x : v) x = static_cast<Real>(rng.uniform(-scale, scale));
  return ad::Tensor::from({rows, cols}, std::move(v), requires_grad);
}

// Random parse tree over [0, n): each token but the root picks an earlier or
// later head inside its own sentence.
inline std::vector<data::DependencyEdge> random_parse(std::size_t n, const std::vector<std::size_t>& starts,
                                                      Rng& rng) {
  std::vector<data::DependencyEdge> edges;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const std::size_t begin = starts[s];
    const std::size_t end = s + 1 < starts.size() ? starts[s + 1] : n;
    if (end - begin < 2) continue;
    const std::size_t root = begin + rng.below(end - begin);
    for (std::size_t d = begin; d < end; ++d) {
      if (d == root) continue;
      std::size_t h = begin + rng.below(end - begin - 1);
      if (h >= d) ++h;  // never d itself
      edges.push_back({h, d, "dep"});
    }
  }
  return edges;
}

// A random annotated example over a small word list.
inline data::Example random_example(Rng& rng, std::size_t passage_len, std::size_t answer_len,
                                    std::size_t question_len, std::size_t sentences = 1,
                                    const std::string& id = "ex") {
  static const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "Paris",
                                                 "river", "built", "in",    "the",   "1850"};
  static const std::vector<std::string> pos = {"NN", "VB", "IN", "DT", "CD"};
  static const std::vector<std::string> ner = {"O", "LOC", "DATE"};
  data::Example ex;
  ex.id = id;
  for (std::size_t i = 0; i < passage_len; ++i)
    ex.passage.push_back(data::make_token(words[rng.below(words.size())], pos[rng.below(pos.size())],
                                          ner[rng.below(ner.size())]));
  ex.sentence_starts = {0};
  for (std::size_t s = 1; s < sentences && s < passage_len; ++s) {
    const std::size_t start = s * passage_len / sentences;
    if (start > ex.sentence_starts.back()) ex.sentence_starts.push_back(start);
  }
  ex.dependency_edges = random_parse(passage_len, ex.sentence_starts, rng);
  ex.answer_start = rng.below(passage_len - answer_len + 1);
  ex.answer_end = ex.answer_start + answer_len;
  for (std::size_t i = 0; i < question_len; ++i) ex.question.push_back(words[rng.below(words.size())]);
  return ex;
}

// Model configuration with every width at most 8.
inline model::Config mini_config(const std::string& graph_type, std::uint64_t seed) {
  model::Config c;
  c.seed = seed;
  c.word_embed_dim = 4;
  c.case_embed_dim = 2;
  c.pos_embed_dim = 2;
  c.ner_embed_dim = 2;
  c.bilstm_hidden = 3;
  c.hidden_size = 6;
  c.graph_embed_dim = 5;
  c.graph_type = graph_type;
  c.graph_k = 3;
  c.gnn_hops = 2;
  c.word_dropout = 0.0;
  c.rnn_dropout = 0.0;
  c.batch_size = 2;
  c.max_decode_len = 6;
  c.beam_width = 3;
  return c;
}

struct MiniModel {
  std::vector<data::Example> examples;
  data::Vocabulary vocab;
  data::FeatureVocab features;
  data::EmbeddingTable table;
  std::unique_ptr<model::Graph2Seq> model;
};

inline MiniModel make_mini_model(const model::Config& config, std::size_t count = 2,
                                 std::size_t passage_len = 5, std::size_t answer_len = 2,
                                 std::size_t question_len = 3) {
  MiniModel m;
  Rng rng(config.seed);
  for (std::size_t i = 0; i < count; ++i)
    m.examples.push_back(random_example(rng, passage_len, answer_len, question_len, 2,
                                        "ex" + std::to_string(i)));
  m.vocab = data::build_vocab(m.examples, config.word_vocab_cap);
  m.features = data::build_feature_vocab(m.examples);
  Rng vec_rng = rng.fork();
  m.table = data::random_embeddings(config.word_embed_dim, m.vocab, vec_rng);
  Rng init = rng.fork();
  m.model = std::make_unique<model::Graph2Seq>(config, m.vocab, m.features, &m.table, init);
  return m;
}

}  // namespace qgen::testing
