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
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qgen/autodiff/ops.hpp"
#include "qgen/common/error.hpp"
#include "qgen/data/batch.hpp"
#include "qgen/training/adam.hpp"
#include "qgen/training/checkpoint.hpp"
#include "qgen/training/losses.hpp"
#include "qgen/training/schedule.hpp"
#include "qgen/training/trainer.hpp"
#include "../support/test_support.hpp"

using namespace qgen;
using ad::Tensor;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qgen_test_" + name);
}

// Log-probability of a fixed token sequence under the model, with history.
Tensor sequence_log_prob(model::Graph2Seq& m, const data::Example& ex, const data::Batch& batch,
                         const std::vector<std::size_t>& tokens) {
  const auto enc = m.encode(ex, batch, 0, {});
  auto state = enc.initial;
  std::size_t prev = data::Vocabulary::kSos;
  Tensor total;
  for (std::size_t y : tokens) {
    const auto out = m.step(enc, state, prev);
    Tensor lp = ad::log(ad::pick(out.distribution, y, 0));
    total = total.defined() ? ad::add(total, lp) : lp;
    state = out.next;
    prev = y;
  }
  return total;
}

}  // namespace

TEST_CASE("adam matches a reference implementation") {
  Rng rng(1);
  ad::ParameterStore store;
  Tensor a = store.add("a", {2, 3}, ad::Init::kUniformFanIn, rng);
  Tensor b = store.add("b", {1, 2}, ad::Init::kUniformFanIn, rng);
  store.add_values("fixed", {1, 1}, {5}, false);
  std::vector<double> ra(a.values().begin(), a.values().end()), rb(b.values().begin(), b.values().end());
  std::vector<double> ma(6, 0), va(6, 0), mb(2, 0), vb(2, 0);
  training::Adam adam;
  const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  for (int t = 1; t <= 6; ++t) {
    store.zero_grad();
    std::vector<double> ga(6), gb(2);
    for (std::size_t i = 0; i < 6; ++i) a.mutable_grad()[i] = static_cast<Real>(ga[i] = rng.uniform(-1, 1));
    const bool b_has_grad = t % 3 != 0;  // b sits out every third step
    if (b_has_grad)
      for (std::size_t i = 0; i < 2; ++i) b.mutable_grad()[i] = static_cast<Real>(gb[i] = rng.uniform(-1, 1));
    adam.step(store, lr);
    auto update = [&](std::vector<double>& p, std::vector<double>& m, std::vector<double>& v,
                      const std::vector<double>& g) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = b1 * m[i] + (1 - b1) * g[i];
        v[i] = b2 * v[i] + (1 - b2) * g[i] * g[i];
        const double mh = m[i] / (1 - std::pow(b1, t)), vh = v[i] / (1 - std::pow(b2, t));
        p[i] -= lr * mh / (std::sqrt(vh) + eps);
      }
    };
    update(ra, ma, va, ga);
    if (b_has_grad) update(rb, mb, vb, gb);
    for (std::size_t i = 0; i < 6; ++i) CHECK(a.values()[i] == doctest::Approx(ra[i]).epsilon(1e-12));
    for (std::size_t i = 0; i < 2; ++i) CHECK(b.values()[i] == doctest::Approx(rb[i]).epsilon(1e-12));
  }
  CHECK(store.at("fixed").tensor.item() == 5);
  CHECK(adam.steps() == 6);
  CHECK(adam.first_moments().count("fixed") == 0);
  adam.reset();
  CHECK(adam.steps() == 0);
  CHECK(adam.first_moments().empty());
}

TEST_CASE("teacher forcing schedule") {
  training::TeacherForcing tf;
  CHECK(tf.probability(0) == doctest::Approx(0.75));
  CHECK(tf.probability(10000) == doctest::Approx(0.75 * std::pow(0.9999, 10000)));
  Rng rng(2);
  int gold = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) gold += tf.use_gold(5000, rng) ? 1 : 0;
  const double p = tf.probability(5000);
  CHECK(std::fabs(gold / static_cast<double>(n) - p) <= 3 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("plateau scheduler hand trace") {
  training::PlateauScheduler s(1.0, 0.5, 2, 4);
  CHECK_FALSE(s.observe(0.1));  // first value is a best
  CHECK(s.improved());
  CHECK_FALSE(s.observe(0.1));  // a tie is not an improvement
  CHECK(s.bad_epochs() == 1);
  CHECK_FALSE(s.observe(0.05));
  CHECK(s.lr() == doctest::Approx(0.5));  // halved after two bad epochs
  CHECK(s.bad_epochs() == 0);
  CHECK_FALSE(s.observe(0.2));
  CHECK(s.best() == doctest::Approx(0.2));
  CHECK(s.epochs_since_best() == 0);
  CHECK_FALSE(s.observe(0.0));
  CHECK_FALSE(s.observe(0.0));
  CHECK(s.lr() == doctest::Approx(0.25));
  CHECK_FALSE(s.observe(0.0));
  CHECK(s.observe(0.0));  // fourth epoch without a best
}

TEST_CASE("cross-entropy with coverage penalty on hand values") {
  decoder::StepOutput s0, s1;
  s0.distribution = Tensor::from({3, 1}, {0.2, 0.5, 0.3}, true);
  s0.attention = Tensor::from({2, 1}, {0.6, 0.4}, true);
  s0.coverage = Tensor::from({2, 1}, {0.0, 0.0});
  s1.distribution = Tensor::from({3, 1}, {0.1, 0.1, 0.8}, true);
  s1.attention = Tensor::from({2, 1}, {0.3, 0.7}, true);
  s1.coverage = Tensor::from({2, 1}, {0.6, 0.4});
  const std::vector<decoder::StepOutput> steps{s0, s1};
  const std::vector<std::size_t> gold{1, 2};
  const Tensor loss = training::xent_coverage_loss(steps, gold, Real(0.4));
  const double expect = -std::log(0.5) - std::log(0.8) + 0.4 * (0.0 + (0.3 + 0.4));
  CHECK(loss.item() == doctest::Approx(expect).epsilon(1e-12));
  ad::backward(loss);
  CHECK(s0.distribution.grad()[1] == doctest::Approx(-1 / 0.5));
  CHECK(s0.distribution.grad()[0] == 0.0);
  // min(a, cov): gradient reaches attention only where it is the smaller one
  CHECK(s1.attention.grad()[0] == doctest::Approx(0.4));
  CHECK(s1.attention.grad()[1] == 0.0);
  CHECK_THROWS_AS(training::xent_coverage_loss(steps, std::vector<std::size_t>{1}, Real(0)), ShapeError);
  // probabilities are floored before the log
  decoder::StepOutput z = s0;
  z.distribution = Tensor::from({3, 1}, {0.0, 0.5, 0.5}, true);
  const std::vector<decoder::StepOutput> zs{z};
  CHECK(training::xent_coverage_loss(zs, std::vector<std::size_t>{0}, Real(0)).item() ==
        doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("self-critical loss and mixing") {
  Tensor lp = Tensor::from({1, 1}, {-2.0}, true);
  CHECK(training::scst_loss(0.3, 0.7, lp).item() == doctest::Approx(0.8));
  Tensor rl = Tensor::scalar(2), lm = Tensor::scalar(10);
  CHECK(training::mixed_loss(rl, lm, Real(0.99)).item() == doctest::Approx(2 * 0.99 + 10 * 0.01));
  CHECK_THROWS_AS(training::mixed_loss(rl, lm, Real(1.5)), DomainError);
  CHECK_THROWS_AS(training::mixed_loss(rl, lm, Real(-0.1)), DomainError);
}

TEST_CASE("tied rewards produce exactly zero parameter gradients") {
  auto config = testing::mini_config("dynamic", 3);
  auto mm = testing::make_mini_model(config, 1);
  const auto batch = data::encode_batch(mm.examples, mm.model->vocab(), mm.model->features());
  const std::vector<std::size_t> tokens{4, 5, data::Vocabulary::kEos};
  mm.model->params().zero_grad();
  ad::backward(training::scst_loss(0.42, 0.42, sequence_log_prob(*mm.model, mm.examples[0], batch, tokens)));
  const auto grads = mm.model->params().gradient_map();
  CHECK_FALSE(grads.empty());
  for (const auto& [name, g] : grads)
    for (Real x : g) CHECK(x == 0.0);
  // and a strict difference moves them
  mm.model->params().zero_grad();
  ad::backward(training::scst_loss(0.2, 0.6, sequence_log_prob(*mm.model, mm.examples[0], batch, tokens)));
  CHECK(ad::global_grad_norm(mm.model->params()) > 0.0);
}

TEST_CASE("full model loss gradients on a miniature configuration") {
  for (const char* mode : {"static", "dynamic"}) {
    auto config = testing::mini_config(mode, 5);
    auto mm = testing::make_mini_model(config, 1, 5, 2, 3);
    training::Trainer trainer(*mm.model, nullptr, 5);
    const auto batch = data::encode_batch(mm.examples, mm.model->vocab(), mm.model->features());
    std::vector<Tensor> inputs;
    for (auto& p : mm.model->params().parameters())
      if (p.trainable) inputs.push_back(p.tensor);
    const auto r = testing::grad_check(
        [&] { return trainer.example_loss(mm.examples[0], batch, 0, false); }, inputs, 1e-4, 6);
    INFO(mode, " ", r.worst);
    CHECK(r.max_rel_error <= 1e-4);
  }
}

TEST_CASE("checkpoint round trip preserves weights, moments and outputs") {
  auto config = testing::mini_config("dynamic", 7);
  auto mm = testing::make_mini_model(config, 3);
  training::Trainer trainer(*mm.model, nullptr, 7);
  trainer.train_batch(mm.examples);
  trainer.state().epoch = 4;
  trainer.state().best_metric = 0.25;
  const auto path = temp_path("roundtrip.ckpt");
  training::save_checkpoint(path, *mm.model, &trainer.optimizer(), trainer.state());
  auto loaded = training::load_checkpoint(path);
  CHECK(loaded.has_optimizer);
  CHECK(loaded.state.epoch == 4);
  CHECK(loaded.state.best_metric == doctest::Approx(0.25));
  CHECK(loaded.state.global_step == 1);
  CHECK(loaded.optimizer.steps() == 1);
  CHECK(loaded.optimizer.first_moments() == trainer.optimizer().first_moments());
  CHECK(loaded.model->config().to_text() == config.to_text());
  for (const auto& p : mm.model->params().parameters()) {
    const auto& q = loaded.model->params().at(p.name);
    CHECK(q.trainable == p.trainable);
    CHECK(q.tensor.to_vector() == p.tensor.to_vector());
  }
  const auto batch = data::encode_batch(mm.examples, mm.model->vocab(), mm.model->features());
  ad::NoGradGuard guard;
  for (std::size_t i = 0; i < mm.examples.size(); ++i) {
    const auto a = model::greedy_decode(*mm.model, mm.model->encode(mm.examples[i], batch, i, {}), 6);
    const auto b = model::greedy_decode(*loaded.model, loaded.model->encode(mm.examples[i], batch, i, {}), 6);
    CHECK(a.tokens == b.tokens);
    CHECK(a.log_prob == b.log_prob);
  }

  // flip one byte near the end (inside a value block)
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(-5, std::ios::end);
    char c;
    f.get(c);
    f.seekp(-5, std::ios::end);
    f.put(static_cast<char>(c ^ 0x5a));
  }
  CHECK_THROWS_AS(training::load_checkpoint(path), IoError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(training::load_checkpoint(temp_path("absent.ckpt")), IoError);
}

TEST_CASE("training steps reduce the loss on a fixed batch") {
  auto config = testing::mini_config("static", 8);
  config.lr_stage1 = 0.01;
  auto mm = testing::make_mini_model(config, 2);
  training::Trainer trainer(*mm.model, nullptr, 8);
  const auto batch = data::encode_batch(mm.examples, mm.model->vocab(), mm.model->features());
  auto eval_loss = [&] {
    ad::NoGradGuard guard;
    double s = 0;
    for (std::size_t i = 0; i < 2; ++i) s += trainer.example_loss(mm.examples[i], batch, i, false).item();
    return s;
  };
  const double before = eval_loss();
  trainer.state().lr = config.lr_stage1;
  for (int i = 0; i < 30; ++i) trainer.train_batch(mm.examples);
  CHECK(eval_loss() < before);
  CHECK(trainer.state().global_step == 30);
}

TEST_CASE("same seed gives identical training losses") {
  auto run = [] {
    auto config = testing::mini_config("dynamic", 9);
    config.word_dropout = 0.3;
    config.rnn_dropout = 0.2;
    auto mm = testing::make_mini_model(config, 4);
    training::Trainer trainer(*mm.model, nullptr, 9);
    std::vector<double> losses;
    for (int i = 0; i < 3; ++i) losses.push_back(trainer.train_batch(mm.examples));
    return losses;
  };
  CHECK(run() == run());
}

TEST_CASE("evaluation reports exact match and predictions") {
  auto config = testing::mini_config("static", 10);
  auto mm = testing::make_mini_model(config, 3);
  training::EvalOptions opts;
  opts.max_len = 5;
  const auto res = training::evaluate(*mm.model, mm.examples, opts);
  REQUIRE(res.predictions.size() == 3);
  std::size_t exact = 0;
  for (std::size_t i = 0; i < 3; ++i) exact += res.predictions[i].tokens == mm.examples[i].question;
  CHECK(res.exact_match == doctest::Approx(exact / 3.0));
  CHECK(res.bleu4 >= 0.0);
  CHECK(res.bleu4 <= 1.0);
}
