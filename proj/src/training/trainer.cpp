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

#include "qgen/training/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "qgen/autodiff/ops.hpp"
#include "qgen/autodiff/tape.hpp"
#include "qgen/common/error.hpp"
#include "qgen/common/log.hpp"
#include "qgen/data/batch.hpp"
#include "qgen/metrics/bleu.hpp"
#include "qgen/metrics/rouge.hpp"
#include "qgen/training/losses.hpp"

namespace qgen::training {

using ad::Tensor;
using data::Vocabulary;

namespace {

std::size_t argmax(std::span<const Real> p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

}  // namespace

EvalResult evaluate(const model::Graph2Seq& model, std::span<const data::Example> examples,
                    const EvalOptions& options) {
  ad::NoGradGuard guard;
  EvalResult result;
  if (examples.empty()) return result;
  std::vector<metrics::Tokens> hyps, refs;
  double rouge_sum = 0.0, reward_sum = 0.0;
  std::size_t exact = 0;
  const alignment::DropoutContext no_dropout;
  const std::size_t bs = std::max<std::size_t>(1, options.batch_size);
  for (std::size_t begin = 0; begin < examples.size(); begin += bs) {
    const auto chunk = examples.subspan(begin, std::min(bs, examples.size() - begin));
    const data::Batch batch = data::encode_batch(chunk, model.vocab(), model.features());
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const auto enc = model.encode(chunk[i], batch, i, no_dropout);
      const auto hyp = options.beam_width <= 1
                           ? model::greedy_decode(model, enc, options.max_len)
                           : model::beam_decode(model, enc, options.beam_width, options.max_len,
                                                options.length_normalize);
      Prediction pred;
      pred.tokens = model::ids_to_words(hyp.tokens, batch, model.vocab());
      pred.score = hyp.score(options.beam_width > 1 && options.length_normalize);
      const auto& ref = chunk[i].question;
      if (pred.tokens == ref) ++exact;
      hyps.push_back(metrics::lowercased(pred.tokens));
      refs.push_back(metrics::lowercased(ref));
      if (!pred.tokens.empty() && !ref.empty()) rouge_sum += metrics::rouge_l(hyps.back(), refs.back());
      if (options.reward)
        reward_sum += metrics::reward(pred.tokens, ref, *options.reward, options.vectors);
      result.predictions.push_back(std::move(pred));
    }
  }
  const double n = static_cast<double>(examples.size());
  result.bleu4 = metrics::corpus_bleu4(hyps, refs, 1e-9);
  result.rouge_l = rouge_sum / n;
  result.exact_match = static_cast<double>(exact) / n;
  result.mean_reward = reward_sum / n;
  return result;
}

nlohmann::json EpochRecord::to_json() const {
  return {{"epoch", epoch}, {"split", split},     {"bleu4", bleu4},
          {"rougeL", rouge_l}, {"loss", loss},    {"lr", lr},
          {"exact_match", exact_match}, {"reward", reward}};
}

Trainer::Trainer(model::Graph2Seq& model, const data::WordVectors* vectors, std::uint64_t seed)
    : model_(model), vectors_(vectors) {
  const auto& c = model.config();
  teacher_.initial = c.tf_initial;
  teacher_.decay = c.tf_decay;
  state_.lr = c.lr_stage1;
  Rng root(seed);
  shuffle_rng_ = root.fork();
  dropout_rng_ = root.fork();
  teacher_rng_ = root.fork();
  sample_rng_ = root.fork();
}

metrics::RewardSpec Trainer::reward_spec() const {
  metrics::RewardSpec spec;
  spec.alpha = model_.config().reward_alpha;
  spec.bleu_epsilon = model_.config().bleu_smoothing;
  spec.undefined_semantic = model_.config().undefined_semantic;
  return spec;
}

EvalOptions Trainer::eval_options(bool with_reward) const {
  EvalOptions o;
  o.beam_width = 1;
  o.max_len = model_.config().max_decode_len;
  o.batch_size = model_.config().batch_size;
  if (with_reward) {
    o.reward = reward_spec();
    o.vectors = vectors_;
  }
  return o;
}

alignment::DropoutContext Trainer::dropout(bool training) {
  alignment::DropoutContext d;
  d.training = training;
  d.word_rate = static_cast<Real>(model_.config().word_dropout);
  d.rnn_rate = static_cast<Real>(model_.config().rnn_dropout);
  d.rng = &dropout_rng_;
  return d;
}

Tensor Trainer::example_loss(const data::Example& example, const data::Batch& batch, std::size_t i,
                             bool training) {
  const auto enc = model_.encode(example, batch, i, dropout(training));
  std::vector<std::size_t> gold(batch.question(i).begin(), batch.question(i).end());
  gold.push_back(Vocabulary::kEos);

  std::vector<decoder::StepOutput> steps;
  steps.reserve(gold.size());
  decoder::DecoderState state = enc.initial;
  std::size_t prev = Vocabulary::kSos;
  for (std::size_t t = 0; t < gold.size(); ++t) {
    steps.push_back(model_.step(enc, state, prev));
    if (t + 1 == gold.size()) break;
    const bool gold_input = !training || teacher_.use_gold(state_.global_step, teacher_rng_);
    prev = gold_input ? gold[t] : argmax(steps.back().distribution.values());
    state = steps.back().next;
  }
  return xent_coverage_loss(steps, gold, static_cast<Real>(model_.config().coverage_lambda));
}

Tensor Trainer::example_scst_loss(const data::Example& example, const data::Batch& batch,
                                  std::size_t i, double* baseline_reward, double* sample_reward) {
  const auto& config = model_.config();
  const auto enc = model_.encode(example, batch, i, dropout(true));
  const auto spec = reward_spec();

  // The baseline is what inference would produce: greedy, without dropout.
  decoder::Hypothesis greedy;
  {
    ad::NoGradGuard guard;
    const auto clean = model_.encode(example, batch, i, dropout(false));
    model::ModelStepper stepper(model_, clean);
    greedy = decoder::greedy_search(stepper, Vocabulary::kEos, config.max_decode_len);
  }

  std::vector<std::size_t> sampled;
  Tensor log_prob_sum;
  decoder::DecoderState state = enc.initial;
  std::size_t prev = Vocabulary::kSos;
  for (std::size_t t = 0; t < config.max_decode_len; ++t) {
    auto out = model_.step(enc, state, prev);
    const auto values = out.distribution.values();
    std::vector<double> p(values.begin(), values.end());
    const std::size_t y = sample_rng_.categorical(p);
    Tensor lp = ad::log(ad::clamp_min(ad::pick(out.distribution, y, 0), kProbabilityFloor));
    log_prob_sum = log_prob_sum.defined() ? ad::add(log_prob_sum, lp) : lp;
    if (y == Vocabulary::kEos) break;
    sampled.push_back(y);
    state = out.next;
    prev = y;
  }

  const auto& ref = example.question;
  const double rb = metrics::reward(model::ids_to_words(greedy.tokens, batch, model_.vocab()), ref,
                                    spec, vectors_);
  const double rs = metrics::reward(model::ids_to_words(sampled, batch, model_.vocab()), ref, spec,
                                    vectors_);
  if (baseline_reward) *baseline_reward = rb;
  if (sample_reward) *sample_reward = rs;

  Tensor rl = scst_loss(rb, rs, log_prob_sum);
  const Real gamma = static_cast<Real>(config.mixed_gamma);
  if (gamma == Real(1)) return rl;
  // The language-model term reuses the same passage encoding.
  std::vector<std::size_t> gold(batch.question(i).begin(), batch.question(i).end());
  gold.push_back(Vocabulary::kEos);
  std::vector<decoder::StepOutput> steps;
  state = enc.initial;
  prev = Vocabulary::kSos;
  for (std::size_t t = 0; t < gold.size(); ++t) {
    steps.push_back(model_.step(enc, state, prev));
    if (t + 1 == gold.size()) break;
    const bool gold_input = teacher_.use_gold(state_.global_step, teacher_rng_);
    prev = gold_input ? gold[t] : argmax(steps.back().distribution.values());
    state = steps.back().next;
  }
  Tensor lm = xent_coverage_loss(steps, gold, static_cast<Real>(config.coverage_lambda));
  return mixed_loss(rl, lm, gamma);
}

double Trainer::apply_update(Tensor loss_sum, std::size_t count) {
  Tensor loss = ad::scale(loss_sum, Real(1) / static_cast<Real>(count));
  const double value = loss.item();
  if (!std::isfinite(value)) throw Error("training loss became non-finite at step " +
                                         std::to_string(state_.global_step));
  model_.params().zero_grad();
  ad::backward(loss);
  ad::clip_gradients(model_.params(), model_.config().grad_clip);
  adam_.step(model_.params(), state_.lr);
  ++state_.global_step;
  return value;
}

double Trainer::train_batch(std::span<const data::Example> examples) {
  if (examples.empty()) throw DataError("train_batch: empty batch");
  const data::Batch batch = data::encode_batch(examples, model_.vocab(), model_.features());
  Tensor total;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    Tensor l = example_loss(examples[i], batch, i, true);
    total = total.defined() ? ad::add(total, l) : l;
  }
  return apply_update(total, examples.size());
}

double Trainer::finetune_batch(std::span<const data::Example> examples) {
  if (examples.empty()) throw DataError("finetune_batch: empty batch");
  const data::Batch batch = data::encode_batch(examples, model_.vocab(), model_.features());
  Tensor total;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    Tensor l = example_scst_loss(examples[i], batch, i);
    total = total.defined() ? ad::add(total, l) : l;
  }
  return apply_update(total, examples.size());
}

std::vector<std::vector<data::Example>> Trainer::make_batches(const std::vector<data::Example>& data) {
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_rng_.shuffle(order);
  const std::size_t bs = model_.config().batch_size;
  std::vector<std::vector<data::Example>> batches;
  for (std::size_t begin = 0; begin < order.size(); begin += bs) {
    std::vector<data::Example> b;
    for (std::size_t k = begin; k < std::min(order.size(), begin + bs); ++k) b.push_back(data[order[k]]);
    batches.push_back(std::move(b));
  }
  return batches;
}

RunSummary Trainer::run_stage1(const std::vector<data::Example>& train,
                               const std::vector<data::Example>& dev, const StageCallbacks& callbacks) {
  if (train.empty()) throw DataError("stage 1: empty training set");
  const auto& c = model_.config();
  state_.stage = "stage1";
  PlateauScheduler scheduler(state_.lr, c.lr_decay, c.lr_patience, c.early_stop);
  scheduler.restore(state_.lr, state_.best_metric, state_.has_best, state_.bad_epochs,
                    state_.epochs_since_best);
  const auto& val = dev.empty() ? train : dev;
  const auto eval = eval_options(false);

  RunSummary summary;
  while (state_.epoch < c.max_epochs) {
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (const auto& b : make_batches(train)) {
      loss_sum += train_batch(b);
      ++batches;
    }
    ++state_.epoch;
    summary.epochs++;

    EpochRecord rec;
    rec.epoch = state_.epoch;
    rec.split = dev.empty() ? "train" : "dev";
    rec.loss = loss_sum / static_cast<double>(batches);
    rec.lr = state_.lr;
    const bool evaluate_now = state_.epoch % c.eval_every == 0 || state_.epoch == c.max_epochs;
    bool stop = false;
    if (evaluate_now) {
      const auto r = evaluate(model_, val, eval);
      rec.bleu4 = r.bleu4;
      rec.rouge_l = r.rouge_l;
      rec.exact_match = r.exact_match;
      stop = scheduler.observe(r.bleu4);
      state_.lr = scheduler.lr();
      state_.best_metric = scheduler.best();
      state_.has_best = scheduler.has_best();
      state_.bad_epochs = scheduler.bad_epochs();
      state_.epochs_since_best = scheduler.epochs_since_best();
      if (scheduler.improved() && callbacks.on_best) callbacks.on_best(state_);
    }
    summary.history.push_back(rec);
    if (callbacks.on_epoch) callbacks.on_epoch(rec);
    log::info("epoch ", rec.epoch, " loss ", rec.loss, " ", rec.split, " bleu4 ", rec.bleu4,
              " exact ", rec.exact_match, " lr ", rec.lr);

    if (c.target_exact_match > 0.0 && evaluate_now) {
      const double em = &val == &train ? rec.exact_match : evaluate(model_, train, eval).exact_match;
      if (em >= c.target_exact_match) {
        summary.reached_target = true;
        summary.target_epoch = state_.epoch;
        if (callbacks.on_target) callbacks.on_target(state_);
        break;
      }
    }
    if (stop) {
      summary.early_stopped = true;
      log::info("no validation improvement for ", c.early_stop, " epochs; stopping");
      break;
    }
  }
  summary.steps = state_.global_step;
  summary.best_metric = state_.best_metric;
  return summary;
}

void Trainer::begin_stage2() {
  const auto& c = model_.config();
  state_.stage = "stage2";
  state_.lr = c.lr_stage2;
  state_.epoch = 0;
  state_.has_best = false;
  state_.best_metric = 0.0;
  state_.bad_epochs = 0;
  state_.epochs_since_best = 0;
  if (c.fresh_stage2_moments) adam_.reset();
}

RunSummary Trainer::run_stage2(const std::vector<data::Example>& train,
                               const std::vector<data::Example>& dev, std::size_t iterations,
                               const StageCallbacks& callbacks) {
  if (train.empty()) throw DataError("stage 2: empty training set");
  const auto& val = dev.empty() ? train : dev;
  const auto eval = eval_options(true);
  RunSummary summary;
  std::size_t done = 0;
  while (done < iterations) {
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (const auto& b : make_batches(train)) {
      if (done == iterations) break;
      loss_sum += finetune_batch(b);
      ++batches;
      ++done;
    }
    ++state_.epoch;
    ++summary.epochs;
    const auto r = evaluate(model_, val, eval);
    EpochRecord rec;
    rec.epoch = state_.epoch;
    rec.split = dev.empty() ? "train" : "dev";
    rec.loss = loss_sum / static_cast<double>(std::max<std::size_t>(1, batches));
    rec.lr = state_.lr;
    rec.bleu4 = r.bleu4;
    rec.rouge_l = r.rouge_l;
    rec.exact_match = r.exact_match;
    rec.reward = r.mean_reward;
    if (!state_.has_best || r.bleu4 > state_.best_metric) {
      state_.best_metric = r.bleu4;
      state_.has_best = true;
      if (callbacks.on_best) callbacks.on_best(state_);
    }
    summary.history.push_back(rec);
    if (callbacks.on_epoch) callbacks.on_epoch(rec);
    log::info("finetune pass ", rec.epoch, " loss ", rec.loss, " bleu4 ", rec.bleu4, " reward ",
              rec.reward);
  }
  summary.steps = state_.global_step;
  summary.best_metric = state_.best_metric;
  return summary;
}

}  // namespace qgen::training
