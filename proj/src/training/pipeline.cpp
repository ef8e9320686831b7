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

#include "qgen/training/pipeline.hpp"

#include <filesystem>
#include <sstream>

#include "qgen/common/error.hpp"
#include "qgen/data/contextual.hpp"
#include "qgen/data/corpus.hpp"

namespace qgen::training {

namespace {

Dataset assemble(const model::Config& config, std::vector<data::Example> train,
                 std::vector<data::Example> dev, const std::function<data::EmbeddingTable(
                                                     const data::Vocabulary&, Rng&)>& vectors) {
  if (train.empty()) throw DataError("training corpus is empty");
  Dataset d;
  d.train = std::move(train);
  d.dev = std::move(dev);
  d.vocab = data::build_vocab(d.train, config.word_vocab_cap);
  d.features = data::build_feature_vocab(d.train);
  Rng rng(config.seed);
  Rng vec_rng = rng.fork();
  d.table = vectors(d.vocab, vec_rng);
  if (d.table.dim != config.word_embed_dim)
    throw ConfigError("word vectors have dimension " + std::to_string(d.table.dim) +
                      " but word_embed_dim is " + std::to_string(config.word_embed_dim));
  return d;
}

}  // namespace

Dataset load_dataset(const model::Config& config) {
  namespace fs = std::filesystem;
  if (config.train_path.empty()) throw ConfigError("train_path is not set");
  if (!fs::exists(config.train_path))
    throw ConfigError("train_path '" + config.train_path + "' does not exist");
  if (!config.dev_path.empty() && !fs::exists(config.dev_path))
    throw ConfigError("dev_path '" + config.dev_path + "' does not exist");
  if (!config.vectors_path.empty() && !fs::exists(config.vectors_path))
    throw ConfigError("vectors_path '" + config.vectors_path + "' does not exist");

  auto train = data::load_corpus(config.train_path);
  std::vector<data::Example> dev;
  if (!config.dev_path.empty()) dev = data::load_corpus(config.dev_path);
  if (config.contextual_dim > 0) {
    if (config.contextual_path.empty())
      throw ConfigError("contextual_dim is set but contextual_path is empty");
    const auto ctx = data::read_contextual_vectors(config.contextual_path);
    if (ctx.dim != config.contextual_dim)
      throw ConfigError("contextual vectors have dimension " + std::to_string(ctx.dim) +
                        " but contextual_dim is " + std::to_string(config.contextual_dim));
    data::attach_contextual_vectors(train, ctx);
    if (!dev.empty()) data::attach_contextual_vectors(dev, ctx);
  }
  return assemble(config, std::move(train), std::move(dev),
                  [&](const data::Vocabulary& vocab, Rng& rng) {
                    return config.vectors_path.empty()
                               ? data::random_embeddings(config.word_embed_dim, vocab, rng)
                               : data::load_embeddings(config.vectors_path, vocab, rng);
                  });
}

Dataset make_dataset(const model::Config& config, std::vector<data::Example> train,
                     std::vector<data::Example> dev, const std::string& vectors_text) {
  return assemble(config, std::move(train), std::move(dev),
                  [&](const data::Vocabulary& vocab, Rng& rng) {
                    if (vectors_text.empty())
                      return data::random_embeddings(config.word_embed_dim, vocab, rng);
                    std::istringstream in(vectors_text);
                    return data::parse_embeddings(in, vocab, rng, "vectors");
                  });
}

std::unique_ptr<model::Graph2Seq> build_model(const model::Config& config, const Dataset& data) {
  Rng rng(config.seed);
  rng.fork();  // the first child stream fills missing word vectors
  Rng init = rng.fork();
  return std::make_unique<model::Graph2Seq>(config, data.vocab, data.features, &data.table, init);
}

data::WordVectors reward_vectors(const model::Graph2Seq& model) {
  const auto& table = model.params().at("embed.words").tensor;
  data::EmbeddingTable rows;
  rows.dim = table.rows();
  rows.values.resize(table.size());
  for (std::size_t w = 0; w < table.cols(); ++w)
    for (std::size_t k = 0; k < table.rows(); ++k) rows.values[w * rows.dim + k] = table.at(k, w);
  return data::WordVectors::from_table(model.vocab(), rows);
}

std::vector<SweepRow> sweep_hops(const model::Config& config, const Dataset& data,
                                 const std::vector<std::size_t>& hops, bool with_ablation,
                                 const StageCallbacks& callbacks) {
  if (hops.empty()) throw ConfigError("sweep: hop list is empty");
  std::vector<std::pair<model::Config, std::string>> runs;
  for (std::size_t h : hops) {
    model::Config c = config;
    c.gnn_hops = h;
    runs.push_back({c, "hops=" + std::to_string(h)});
  }
  if (with_ablation) {
    model::Config c = config;
    c.use_alignment = false;
    runs.push_back({c, "hops=" + std::to_string(c.gnn_hops) + " no-alignment"});
  }
  std::vector<SweepRow> rows;
  for (const auto& [c, label] : runs) {
    auto m = build_model(c, data);
    const auto vectors = reward_vectors(*m);
    Trainer trainer(*m, &vectors, c.seed);
    const auto summary = trainer.run_stage1(data.train, data.dev, callbacks);
    SweepRow row;
    row.label = label;
    row.hops = c.gnn_hops;
    row.alignment = c.use_alignment;
    row.best_bleu4 = summary.best_metric;
    row.final_bleu4 = summary.history.empty() ? 0.0 : summary.history.back().bleu4;
    row.epochs = summary.epochs;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qgen::training
