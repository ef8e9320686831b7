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

#include <cmath>

#include "doctest.h"
#include "qgen/alignment/alignment.hpp"
#include "qgen/autodiff/ops.hpp"
#include "qgen/autodiff/parameter.hpp"
#include "qgen/common/error.hpp"
#include "../support/test_support.hpp"

using namespace qgen;
using ad::Tensor;
using testing::grad_check;
using testing::random_tensor;

TEST_CASE("soft alignment matches a direct computation") {
  Rng rng(1);
  Tensor w = random_tensor(3, 2, rng, 1.0, false);
  Tensor sp = random_tensor(2, 4, rng, 1.0, false), sa = random_tensor(2, 3, rng, 1.0, false);
  Tensor vp = random_tensor(2, 4, rng, 1.0, false), va = random_tensor(5, 3, rng, 1.0, false);
  const auto res = alignment::soft_align(w, sp, sa, vp, va);
  REQUIRE(res.output.rows() == 7);
  REQUIRE(res.beta.rows() == 4);
  REQUIRE(res.beta.cols() == 3);
  auto relu_proj = [&](const Tensor& s, std::size_t j) {
    std::vector<double> out(3, 0.0);
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 2; ++c) out[r] += w.at(r, c) * s.at(c, j);
      out[r] = std::max(0.0, out[r]);
    }
    return out;
  };
  for (std::size_t i = 0; i < 4; ++i) {
    const auto pi = relu_proj(sp, i);
    std::vector<double> e(3);
    double z = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      const auto aj = relu_proj(sa, j);
      e[j] = pi[0] * aj[0] + pi[1] * aj[1] + pi[2] * aj[2];
    }
    const double m = std::max({e[0], e[1], e[2]});
    for (auto& x : e) z += (x = std::exp(x - m));
    for (std::size_t j = 0; j < 3; ++j) CHECK(res.beta.at(i, j) == doctest::Approx(e[j] / z).epsilon(1e-12));
    for (std::size_t r = 0; r < 2; ++r) CHECK(res.output.at(r, i) == vp.at(r, i));
    for (std::size_t r = 0; r < 5; ++r) {
      double expect = 0;
      for (std::size_t j = 0; j < 3; ++j) expect += va.at(r, j) * e[j] / z;
      CHECK(res.output.at(2 + r, i) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("soft alignment gradients and empty answers") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    Tensor w = random_tensor(3, 2, rng);
    Tensor sp = random_tensor(2, 4, rng), sa = random_tensor(2, 2, rng);
    Tensor vp = random_tensor(2, 4, rng), va = random_tensor(3, 2, rng);
    Tensor probe = random_tensor(5, 4, rng, 1.0, false);
    const auto r = grad_check(
        [&] { return ad::sum(ad::mul(alignment::soft_align(w, sp, sa, vp, va).output, probe)); },
        {w, sp, sa, vp, va});
    INFO(r.worst);
    CHECK(r.max_rel_error <= 1e-5);
  }
  Rng rng(9);
  CHECK_THROWS_AS(alignment::soft_align(random_tensor(3, 2, rng), random_tensor(2, 4, rng),
                                        Tensor::zeros({2, 0}), random_tensor(2, 4, rng),
                                        Tensor::zeros({3, 0})),
                  DataError);
}

TEST_CASE("alignment network output widths") {
  for (bool enabled : {true, false}) {
    Rng rng(3);
    alignment::AlignmentDims dims;
    dims.word_dim = 4;
    dims.feature_dim = 3;
    dims.bilstm_hidden = 2;
    dims.hidden = 5;
    dims.enabled = enabled;
    ad::ParameterStore store;
    alignment::DeepAlignmentNetwork dan(store, dims, rng);
    CHECK(store.contains("dan.word_align.w") == enabled);
    CHECK(dims.word_level_width() == (enabled ? 4 + 4 + 3 : 4 + 3));
    alignment::AlignmentInputs in{random_tensor(4, 5, rng), random_tensor(4, 2, rng),
                                  random_tensor(3, 5, rng), {}, {}};
    const auto word = dan.word_level(in, {});
    CHECK(word.aligned_p.rows() == dims.word_level_width());
    CHECK(word.aligned_p.cols() == 5);
    CHECK(word.context_p.rows() == 4);
    CHECK(word.beta.defined() == enabled);
    const Tensor x = dan.contextual_level(in, word, {});
    CHECK(x.rows() == 4);
    CHECK(x.cols() == 5);
  }
}

TEST_CASE("alignment network gradients") {
  Rng rng(4);
  alignment::AlignmentDims dims;
  dims.word_dim = 3;
  dims.feature_dim = 2;
  dims.contextual_dim = 2;
  dims.bilstm_hidden = 2;
  dims.hidden = 3;
  ad::ParameterStore store;
  alignment::DeepAlignmentNetwork dan(store, dims, rng);
  alignment::AlignmentInputs in{random_tensor(3, 4, rng), random_tensor(3, 2, rng),
                                random_tensor(2, 4, rng), random_tensor(2, 4, rng),
                                random_tensor(2, 2, rng)};
  Tensor probe = random_tensor(4, 4, rng, 1.0, false);
  std::vector<Tensor> inputs;
  for (auto& p : store.parameters()) inputs.push_back(p.tensor);
  inputs.push_back(in.words_p);
  inputs.push_back(in.words_a);
  const auto r = grad_check(
      [&] {
        const auto word = dan.word_level(in, {});
        return ad::sum(ad::mul(dan.contextual_level(in, word, {}), probe));
      },
      inputs);
  INFO(r.worst);
  CHECK(r.max_rel_error <= 1e-5);
}
