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

#include <memory>
#include <string>
#include <vector>

#include "qgen/data/embeddings.hpp"
#include "qgen/data/example.hpp"
#include "qgen/data/vocab.hpp"
#include "qgen/model/config.hpp"
#include "qgen/model/graph2seq.hpp"
#include "qgen/training/trainer.hpp"

namespace qgen::training {

// Corpus splits plus the vocabularies and fixed word vectors derived from
// the training split.
struct Dataset {
  std::vector<data::Example> train;
  std::vector<data::Example> dev;
  data::Vocabulary vocab;
  data::FeatureVocab features;
  data::EmbeddingTable table;
};

// Reads train/dev corpora, word vectors and contextual vectors named in the
// config. A missing or empty train_path is a ConfigError.
Dataset load_dataset(const model::Config& config);
// Same from in-memory examples; `vectors_text` may be empty for random vectors.
Dataset make_dataset(const model::Config& config, std::vector<data::Example> train,
                     std::vector<data::Example> dev, const std::string& vectors_text);

std::unique_ptr<model::Graph2Seq> build_model(const model::Config& config, const Dataset& data);

// Word vectors of the model's fixed input table, keyed by word.
data::WordVectors reward_vectors(const model::Graph2Seq& model);

struct SweepRow {
  std::string label;
  std::size_t hops = 0;
  bool alignment = true;
  double best_bleu4 = 0.0;   // best validation BLEU-4 over the run
  double final_bleu4 = 0.0;  // validation BLEU-4 after the last epoch
  std::size_t epochs = 0;
};

// Trains one model per hop count from the same seed. With `with_ablation`
// an extra row trains the configured hop count without the alignment network.
std::vector<SweepRow> sweep_hops(const model::Config& config, const Dataset& data,
                                 const std::vector<std::size_t>& hops, bool with_ablation,
                                 const StageCallbacks& callbacks = {});

}  // namespace qgen::training
