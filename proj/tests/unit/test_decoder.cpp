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
#include <functional>
#include <map>

#include "doctest.h"
#include "qgen/autodiff/ops.hpp"
#include "qgen/autodiff/parameter.hpp"
#include "qgen/common/error.hpp"
#include "qgen/data/batch.hpp"
#include "qgen/decoder/decoder.hpp"
#include "qgen/decoder/search.hpp"
#include "qgen/model/graph2seq.hpp"
#include "../support/test_support.hpp"

using namespace qgen;
using ad::Tensor;
using testing::grad_check;
using testing::random_tensor;

namespace {

struct Fixture {
  ad::ParameterStore store;
  decoder::DecoderDims dims;
  decoder::Decoder dec;
  Tensor memory;
  Tensor graph;
  std::vector<std::size_t> sources;

  explicit Fixture(std::uint64_t seed) {
    Rng rng(seed);
    dims.word_dim = 3;
    dims.hidden = 4;
    dims.memory_dim = 5;
    dims.graph_dim = 2;
    dims.vocab_size = 7;
    dims.unk_index = 1;
    Tensor emb = random_tensor(3, 7, rng, 1.0, false);
    dec = decoder::Decoder(store, dims, emb, rng);
    memory = random_tensor(5, 4, rng);
    graph = random_tensor(2, 1, rng);
    // two source tokens are in vocabulary, two only in the extended range
    sources = {4, 7, 2, 8};
  }
};

// Distribution over next tokens given the prefix, from a fixed random table.
struct TableStepper {
  struct State {
    std::vector<std::size_t> prefix;
  };
  std::size_t vocab;
  std::uint64_t seed;
  std::function<std::vector<double>(const std::vector<std::size_t>&)> table;

  State initial() const { return {}; }
  std::vector<double> probs(const State& s) const { return table(s.prefix); }
  State advance(const State& s, std::size_t y) const {
    State n = s;
    n.prefix.push_back(y);
    return n;
  }
};

std::vector<double> random_distribution(std::size_t n, std::uint64_t key) {
  Rng rng(key);
  std::vector<double> p(n);
  double z = 0;
  for (auto& x : p) z += (x = rng.uniform(0.05, 1.0));
  for (auto& x : p) x /= z;
  return p;
}

std::uint64_t prefix_key(std::uint64_t seed, const std::vector<std::size_t>& prefix) {
  std::uint64_t k = seed * 1000003ULL + 17;
  for (std::size_t t : prefix) k = k * 31 + t + 1;
  return k;
}

// Every sequence of at most max_len tokens that ends in eos or runs out of
// length, scored by summed log-probability.
void enumerate(const TableStepper& s, std::size_t eos, std::size_t max_len, std::vector<std::size_t>& prefix,
               double lp, decoder::Hypothesis& best) {
  const auto p = s.table(prefix);
  for (std::size_t y = 0; y < p.size(); ++y) {
    const double l = lp + std::log(p[y]);
    if (y == eos || prefix.size() + 1 == max_len) {
      decoder::Hypothesis h;
      h.tokens = prefix;
      if (y != eos) h.tokens.push_back(y);
      h.log_prob = l;
      h.finished = y == eos;
      if (best.step_log_probs.empty() || l > best.log_prob) {
        best = h;
        best.step_log_probs = {0};  // marks "set"
      }
      continue;
    }
    prefix.push_back(y);
    enumerate(s, eos, max_len, prefix, l, best);
    prefix.pop_back();
  }
}

}  // namespace

TEST_CASE("output distribution sums to one over the extended vocabulary") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Fixture f(seed);
    const auto ctx = f.dec.prepare(f.memory, f.sources, 9);
    auto state = f.dec.init_state(f.graph, 4);
    std::size_t prev = data::Vocabulary::kSos;
    for (std::size_t t = 0; t < 6; ++t) {
      const auto out = f.dec.step(ctx, state, prev);
      REQUIRE(out.distribution.rows() == 9);
      double total = 0;
      for (Real p : out.distribution.values()) {
        CHECK(p >= 0.0);
        total += p;
      }
      CHECK(std::fabs(total - 1.0) <= 1e-9);
      // coverage recurrence, bit for bit
      for (std::size_t i = 0; i < 4; ++i)
        CHECK(out.next.coverage.at(i, 0) == out.coverage.at(i, 0) + out.attention.at(i, 0));
      CHECK(out.coverage.to_vector() == state.coverage.to_vector());
      state = out.next;
      prev = (seed + t) % 9;  // includes extended ids
    }
  }
}

TEST_CASE("generation switch extremes isolate the two output paths") {
  Fixture f(3);
  auto ctx = f.dec.prepare(f.memory, f.sources, 9);
  const auto state = f.dec.init_state(f.graph, 4);
  ctx.forced_p_gen = Real(0);
  const auto copy = f.dec.step(ctx, state, data::Vocabulary::kSos);
  std::vector<double> expect(9, 0.0);
  for (std::size_t i = 0; i < 4; ++i) expect[f.sources[i]] += copy.attention.at(i, 0);
  for (std::size_t v = 0; v < 9; ++v) CHECK(copy.distribution.at(v, 0) == doctest::Approx(expect[v]));
  ctx.forced_p_gen = Real(1);
  const auto gen = f.dec.step(ctx, state, data::Vocabulary::kSos);
  CHECK(gen.distribution.at(7, 0) == 0.0);
  CHECK(gen.distribution.at(8, 0) == 0.0);
}

TEST_CASE("decoder gradients") {
  Fixture f(4);
  std::vector<Tensor> inputs{f.memory, f.graph};
  for (auto& p : f.store.parameters()) inputs.push_back(p.tensor);
  const std::vector<std::size_t> gold = {7, 4, 3};
  const auto r = grad_check(
      [&] {
        const auto ctx = f.dec.prepare(f.memory, f.sources, 9);
        auto state = f.dec.init_state(f.graph, 4);
        std::size_t prev = data::Vocabulary::kSos;
        Tensor loss;
        for (std::size_t t = 0; t < gold.size(); ++t) {
          const auto out = f.dec.step(ctx, state, prev);
          Tensor nll = ad::scale(ad::log(ad::pick(out.distribution, gold[t], 0)), Real(-1));
          Tensor cov = ad::sum(ad::minimum(out.attention, out.coverage));
          Tensor term = ad::add(nll, cov);
          loss = loss.defined() ? ad::add(loss, term) : term;
          state = out.next;
          prev = gold[t];
        }
        return loss;
      },
      inputs);
  INFO(r.worst);
  CHECK(r.max_rel_error <= 1e-5);
}

TEST_CASE("beam search equals exhaustive enumeration on small tables") {
  const std::size_t eos = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const std::size_t vocab = 3;
    TableStepper s{vocab, seed, [seed](const std::vector<std::size_t>& prefix) {
                     return random_distribution(3, prefix_key(seed, prefix));
                   }};
    decoder::Hypothesis best;
    std::vector<std::size_t> prefix;
    enumerate(s, eos, 3, prefix, 0.0, best);
    const auto beam = decoder::beam_search(s, eos, 3, 27, false);
    CHECK(beam.tokens == best.tokens);
    CHECK(beam.finished == best.finished);
    CHECK(beam.log_prob == doctest::Approx(best.log_prob).epsilon(1e-12));
  }
}

TEST_CASE("hand-built table where greedy misses the best sequence") {
  // token 0 = eos. Greedy takes 1 (0.6) then is forced into low mass; the
  // best path starts with 2 (0.4) then eos (0.9).
  TableStepper s{3, 0, [](const std::vector<std::size_t>& prefix) -> std::vector<double> {
                   if (prefix.empty()) return {0.0, 0.6, 0.4};
                   if (prefix == std::vector<std::size_t>{1}) return {0.3, 0.35, 0.35};
                   if (prefix == std::vector<std::size_t>{2}) return {0.9, 0.05, 0.05};
                   return {1.0, 0.0, 0.0};
                 }};
  const auto greedy = decoder::greedy_search(s, 0, 3);
  CHECK(greedy.tokens == std::vector<std::size_t>{1, 1});
  const auto beam = decoder::beam_search(s, 0, 3, 2, false);
  CHECK(beam.tokens == std::vector<std::size_t>{2});
  CHECK(beam.finished);
  CHECK(beam.log_prob == doctest::Approx(std::log(0.4 * 0.9)));
  // length normalisation can prefer the longer hypothesis
  decoder::Hypothesis a, b;
  a.tokens = {1};
  a.log_prob = -1.0;
  a.finished = true;
  b.tokens = {1, 2, 3};
  b.log_prob = -1.5;
  b.finished = true;
  CHECK(a.score(false) > b.score(false));
  CHECK(b.score(true) > a.score(true));
  CHECK_THROWS_AS(decoder::beam_search(s, 0, 3, 0, false), ConfigError);
}

TEST_CASE("sampling follows the stepper distribution") {
  TableStepper s{3, 0, [](const std::vector<std::size_t>& prefix) -> std::vector<double> {
                   if (prefix.empty()) return {0.2, 0.5, 0.3};
                   return {1.0, 0.0, 0.0};
                 }};
  Rng rng(42);
  std::map<std::size_t, int> counts;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto h = decoder::sample_search(s, 0, 3, rng);
    counts[h.tokens.empty() ? 0 : h.tokens[0]]++;
  }
  // three standard deviations of a binomial proportion
  for (auto [tok, p] : std::vector<std::pair<std::size_t, double>>{{0, 0.2}, {1, 0.5}, {2, 0.3}}) {
    const double freq = counts[tok] / static_cast<double>(n);
    CHECK(std::fabs(freq - p) <= 3 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("beam width one equals greedy on random mini models") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto config = testing::mini_config(seed % 2 ? "static" : "dynamic", seed);
    auto mm = testing::make_mini_model(config, 1);
    const auto batch = data::encode_batch(mm.examples, mm.model->vocab(), mm.model->features());
    ad::NoGradGuard guard;
    const auto enc = mm.model->encode(mm.examples[0], batch, 0, {});
    for (bool norm : {false, true}) {
      const auto g = model::greedy_decode(*mm.model, enc, 6);
      const auto b = model::beam_decode(*mm.model, enc, 1, 6, norm);
      CHECK(g.tokens == b.tokens);
      CHECK(g.log_prob == doctest::Approx(b.log_prob).epsilon(1e-12));
    }
  }
}
