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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgen/data/embeddings.hpp"
#include "qgen/data/example.hpp"
#include "qgen/metrics/reward.hpp"
#include "qgen/model/graph2seq.hpp"
#include "qgen/training/adam.hpp"
#include "qgen/training/checkpoint.hpp"
#include "qgen/training/schedule.hpp"

namespace qgen::training {

struct EvalOptions {
  std::size_t beam_width = 1;  // 1 = greedy
  std::size_t max_len = 30;
  bool length_normalize = true;
  std::size_t batch_size = 50;
  // When set, the mean reward of the predictions is reported as well.
  std::optional<metrics::RewardSpec> reward;
  const data::WordVectors* vectors = nullptr;
};

struct Prediction {
  std::vector<std::string> tokens;
  double score = 0.0;
};

struct EvalResult {
  double bleu4 = 0.0;       // corpus level, lowercased
  double rouge_l = 0.0;     // mean over examples
  double exact_match = 0.0; // fraction of predictions equal to the reference
  double mean_reward = 0.0;
  std::vector<Prediction> predictions;
};

// Decodes every example with the model in inference mode.
EvalResult evaluate(const model::Graph2Seq& model, std::span<const data::Example> examples,
                    const EvalOptions& options);

struct EpochRecord {
  std::size_t epoch = 0;
  std::string split;
  double bleu4 = 0.0;
  double rouge_l = 0.0;
  double loss = 0.0;
  double lr = 0.0;
  double exact_match = 0.0;
  double reward = 0.0;

  nlohmann::json to_json() const;
};

struct StageCallbacks {
  std::function<void(const EpochRecord&)> on_epoch;
  // Called whenever the validation metric reaches a new best.
  std::function<void(const TrainingState&)> on_best;
  // Called once when training-set exact match first reaches the target.
  std::function<void(const TrainingState&)> on_target;
};

struct RunSummary {
  std::size_t epochs = 0;
  std::size_t steps = 0;
  bool early_stopped = false;
  bool reached_target = false;
  std::size_t target_epoch = 0;
  double best_metric = 0.0;
  std::vector<EpochRecord> history;
};

class Trainer {
 public:
  Trainer(model::Graph2Seq& model, const data::WordVectors* vectors, std::uint64_t seed);

  // Stage 1: cross-entropy + coverage with scheduled teacher forcing.
  // Returns the mean per-example loss of the batch.
  double train_batch(std::span<const data::Example> examples);
  // Stage 2: mixed self-critical / cross-entropy objective.
  double finetune_batch(std::span<const data::Example> examples);

  // Per-example stage-1 loss graph (exposed for gradient checks).
  ad::Tensor example_loss(const data::Example& example, const data::Batch& batch, std::size_t i,
                          bool training);
  // Per-example stage-2 loss graph; reports both rewards when asked.
  ad::Tensor example_scst_loss(const data::Example& example, const data::Batch& batch,
                               std::size_t i, double* baseline_reward = nullptr,
                               double* sample_reward = nullptr);

  RunSummary run_stage1(const std::vector<data::Example>& train, const std::vector<data::Example>& dev,
                        const StageCallbacks& callbacks = {});
  // `iterations` optimizer steps over reshuffled training batches; metrics
  // are recorded after every pass over the data and after the last step.
  RunSummary run_stage2(const std::vector<data::Example>& train, const std::vector<data::Example>& dev,
                        std::size_t iterations, const StageCallbacks& callbacks = {});

  // Prepares stage 2: learning rate from the config, optionally fresh moments.
  void begin_stage2();

  Adam& optimizer() { return adam_; }
  TrainingState& state() { return state_; }
  const TrainingState& state() const { return state_; }
  model::Graph2Seq& model() { return model_; }
  metrics::RewardSpec reward_spec() const;
  EvalOptions eval_options(bool with_reward) const;

 private:
  double apply_update(ad::Tensor loss_sum, std::size_t count);
  alignment::DropoutContext dropout(bool training);
  std::vector<std::vector<data::Example>> make_batches(const std::vector<data::Example>& data);

  model::Graph2Seq& model_;
  const data::WordVectors* vectors_;
  Adam adam_;
  TrainingState state_;
  TeacherForcing teacher_;
  Rng shuffle_rng_, dropout_rng_, teacher_rng_, sample_rng_;
};

}  // namespace qgen::training
