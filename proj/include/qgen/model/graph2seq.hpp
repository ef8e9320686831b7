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

#include "qgen/alignment/alignment.hpp"
#include "qgen/autodiff/parameter.hpp"
#include "qgen/data/batch.hpp"
#include "qgen/data/embeddings.hpp"
#include "qgen/data/example.hpp"
#include "qgen/data/vocab.hpp"
#include "qgen/decoder/decoder.hpp"
#include "qgen/decoder/search.hpp"
#include "qgen/gnn/biggnn.hpp"
#include "qgen/graph/passage_graph.hpp"
#include "qgen/model/config.hpp"

namespace qgen::model {

// Everything the decoder needs for one passage.
struct Encoded {
  alignment::WordLevelOutput word;
  ad::Tensor passage;  // X, node_dim x N
  graph::PassageGraph graph;
  gnn::EncoderOutput gnn;
  decoder::DecodeContext context;
  decoder::DecoderState initial;
};

class Graph2Seq {
 public:
  // `words` supplies the fixed input vectors; pass nullptr to start from
  // zeros (the checkpoint loader fills them afterwards).
  Graph2Seq(const Config& config, data::Vocabulary vocab, data::FeatureVocab features,
            const data::EmbeddingTable* words, Rng& init_rng);

  // Encodes example `i` of `batch`; `example` must be the same instance
  // (it supplies the parse and contextual vectors).
  Encoded encode(const data::Example& example, const data::Batch& batch, std::size_t i,
                 const alignment::DropoutContext& dropout) const;
  decoder::StepOutput step(const Encoded& enc, const decoder::DecoderState& state,
                           std::size_t prev_token) const;

  ad::ParameterStore& params() { return params_; }
  const ad::ParameterStore& params() const { return params_; }
  const Config& config() const { return config_; }
  const data::Vocabulary& vocab() const { return vocab_; }
  const data::FeatureVocab& features() const { return features_; }
  const decoder::Decoder& decoder() const { return decoder_; }
  const alignment::DeepAlignmentNetwork& alignment() const { return dan_; }
  graph::GraphMode graph_mode() const { return graph_mode_; }
  // Hop count used by encode(); defaults to config.gnn_hops.
  std::size_t hops() const { return hops_; }
  void set_hops(std::size_t hops) { hops_ = hops; }

 private:
  Config config_;
  data::Vocabulary vocab_;
  data::FeatureVocab features_;
  graph::GraphMode graph_mode_;
  std::size_t hops_;
  ad::ParameterStore params_;
  ad::Tensor word_table_;  // word_embed_dim x |V|, fixed
  ad::Tensor case_table_, pos_table_, ner_table_;
  ad::Tensor graph_projection_;  // hidden x word-level width
  alignment::DeepAlignmentNetwork dan_;
  gnn::BiGGNN gnn_;
  decoder::Decoder decoder_;
};

// Search adaptor over one encoded passage. Step outputs are cached per
// state so probs() followed by advance() runs the decoder once.
class ModelStepper {
 public:
  struct State {
    decoder::DecoderState decoder;
    std::size_t prev_token;
    mutable std::shared_ptr<decoder::StepOutput> cache;
  };

  ModelStepper(const Graph2Seq& model, const Encoded& encoded) : model_(model), encoded_(encoded) {}

  State initial() const;
  std::vector<double> probs(const State& state) const;
  State advance(const State& state, std::size_t token) const;

 private:
  const decoder::StepOutput& output(const State& state) const;

  const Graph2Seq& model_;
  const Encoded& encoded_;
};

// Inference helpers; gradients are not recorded.
decoder::Hypothesis greedy_decode(const Graph2Seq& model, const Encoded& encoded, std::size_t max_len);
decoder::Hypothesis beam_decode(const Graph2Seq& model, const Encoded& encoded, std::size_t width,
                                std::size_t max_len, bool length_normalize);

// Extended ids to words, via the batch's out-of-vocabulary list.
std::vector<std::string> ids_to_words(const std::vector<std::size_t>& ids, const data::Batch& batch,
                                      const data::Vocabulary& vocab);

}  // namespace qgen::model
