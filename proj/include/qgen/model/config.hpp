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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace qgen::model {

// Every model dimension, training hyperparameter and path. Serialised as a
// flat "key = value" file; unknown keys are rejected.
struct Config {
  std::uint64_t seed = 1;

  // inputs
  std::string train_path;
  std::string dev_path;
  std::string test_path;
  std::string vectors_path;     // text word vectors; empty = random vectors
  std::string contextual_path;  // optional per-token vectors; empty = none

  // embeddings and widths
  std::size_t word_vocab_cap = 70000;
  std::size_t word_embed_dim = 300;
  std::size_t case_embed_dim = 3;
  std::size_t pos_embed_dim = 12;
  std::size_t ner_embed_dim = 8;
  std::size_t contextual_dim = 0;
  std::size_t bilstm_hidden = 150;  // per direction
  std::size_t hidden_size = 300;    // decoder state and alignment projections
  std::size_t graph_embed_dim = 300;

  // regularisation
  double word_dropout = 0.4;
  double rnn_dropout = 0.3;

  // encoder structure
  bool use_alignment = true;
  std::string graph_type = "dynamic";
  std::size_t graph_k = 10;
  std::size_t gnn_hops = 3;
  std::string gnn_direction = "bi";
  std::string gnn_fusion = "interleaved";

  // objectives
  double coverage_lambda = 0.4;
  double reward_alpha = 0.1;
  double mixed_gamma = 0.99;
  double bleu_smoothing = 1e-9;
  double undefined_semantic = -1.0;

  // optimisation
  double tf_initial = 0.75;
  double tf_decay = 0.9999;
  double lr_stage1 = 0.001;
  double lr_stage2 = 0.00001;
  double lr_decay = 0.5;
  std::size_t lr_patience = 3;
  std::size_t early_stop = 10;
  double grad_clip = 10.0;
  std::size_t batch_size = 50;
  std::size_t max_epochs = 100;
  std::size_t finetune_iterations = 1000;
  bool fresh_stage2_moments = true;
  // Stage 1 stops once training-set exact match reaches this fraction
  // (0 disables the check).
  double target_exact_match = 0.0;
  std::size_t eval_every = 1;

  // decoding
  std::size_t beam_width = 5;
  std::size_t max_decode_len = 30;
  bool length_normalize = true;

  std::size_t feature_dim() const { return case_embed_dim + pos_embed_dim + ner_embed_dim; }
  std::size_t node_dim() const { return 2 * bilstm_hidden; }

  // Throws ConfigError naming the first offending key.
  void validate() const;

  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  // Ordered key = value pairs, one per line.
  std::string to_text() const;
  nlohmann::json to_json() const;
  static Config from_json(const nlohmann::json& j);
};

// "key = value" lines, '#' comments and blank lines allowed.
Config parse_config(const std::string& text, const std::string& source = "config");
Config load_config(const std::filesystem::path& path);
// Applies "key=value" strings in order.
void apply_overrides(Config& config, const std::vector<std::string>& overrides);

}  // namespace qgen::model
