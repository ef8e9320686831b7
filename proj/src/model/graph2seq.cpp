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

#include "qgen/model/graph2seq.hpp"

#include "qgen/autodiff/ops.hpp"
#include "qgen/common/error.hpp"

namespace qgen::model {

using ad::Tensor;

namespace {

// Row-major vocab x dim table to a dim x vocab tensor.
std::vector<Real> transposed(const data::EmbeddingTable& table, std::size_t vocab, std::size_t dim) {
  std::vector<Real> out(dim * vocab, Real(0));
  for (std::size_t w = 0; w < vocab; ++w)
    for (std::size_t k = 0; k < dim; ++k) out[k * vocab + w] = table.values[w * dim + k];
  return out;
}

}  // namespace

Graph2Seq::Graph2Seq(const Config& config, data::Vocabulary vocab, data::FeatureVocab features,
                     const data::EmbeddingTable* words, Rng& rng)
    : config_(config),
      vocab_(std::move(vocab)),
      features_(std::move(features)),
      graph_mode_(graph::parse_graph_mode(config.graph_type)),
      hops_(config.gnn_hops) {
  config_.validate();
  const std::size_t v = vocab_.size(), e = config.word_embed_dim;
  std::vector<Real> table(e * v, Real(0));
  if (words != nullptr) {
    if (words->dim != e || words->rows() != v)
      throw ConfigError("word vectors are " + std::to_string(words->rows()) + "x" +
                        std::to_string(words->dim) + ", model expects " + std::to_string(v) + "x" +
                        std::to_string(e));
    table = transposed(*words, v, e);
  }
  word_table_ = params_.add_values("embed.words", {e, v}, std::move(table), false);
  case_table_ = params_.add("embed.case", {config.case_embed_dim, data::kCaseClassCount},
                            ad::Init::kUniformFanIn, rng);
  pos_table_ = params_.add("embed.pos", {config.pos_embed_dim, features_.pos.size()},
                           ad::Init::kUniformFanIn, rng);
  ner_table_ = params_.add("embed.ner", {config.ner_embed_dim, features_.ner.size()},
                           ad::Init::kUniformFanIn, rng);

  alignment::AlignmentDims dims;
  dims.word_dim = e;
  dims.feature_dim = config.feature_dim();
  dims.contextual_dim = config.contextual_dim;
  dims.bilstm_hidden = config.bilstm_hidden;
  dims.hidden = config.hidden_size;
  dims.enabled = config.use_alignment;
  dan_ = alignment::DeepAlignmentNetwork(params_, dims, rng);

  if (graph_mode_ == graph::GraphMode::kDynamic)
    graph_projection_ = params_.add("graph.projection", {config.hidden_size, dims.word_level_width()},
                                    ad::Init::kUniformFanIn, rng);

  gnn::BiGGNNOptions gopt;
  gopt.node_dim = config.node_dim();
  gopt.graph_dim = config.graph_embed_dim;
  gopt.direction = gnn::parse_direction(config.gnn_direction);
  gopt.fusion = gnn::parse_fusion(config.gnn_fusion);
  gnn_ = gnn::BiGGNN(params_, gopt, rng);

  decoder::DecoderDims ddims;
  ddims.word_dim = e;
  ddims.hidden = config.hidden_size;
  ddims.memory_dim = config.node_dim();
  ddims.graph_dim = config.graph_embed_dim;
  ddims.vocab_size = v;
  ddims.unk_index = data::Vocabulary::kUnk;
  decoder_ = decoder::Decoder(params_, ddims, word_table_, rng);
}

Encoded Graph2Seq::encode(const data::Example& example, const data::Batch& batch, std::size_t i,
                          const alignment::DropoutContext& dropout) const {
  const auto passage = batch.passage(i);
  const std::size_t n = passage.size();
  if (n != example.passage_length())
    throw DataError("encode: batch row " + std::to_string(i) + " does not match example '" +
                    example.id + "'");
  alignment::AlignmentInputs in;
  in.words_p = ad::gather_cols(word_table_, passage);
  in.words_a = ad::gather_cols(word_table_, batch.answer(i));
  in.features_p = ad::concat_rows({ad::gather_cols(case_table_, batch.casing(i)),
                                   ad::gather_cols(pos_table_, batch.pos(i)),
                                   ad::gather_cols(ner_table_, batch.ner(i))});
  if (config_.contextual_dim > 0) {
    if (example.contextual_dim != config_.contextual_dim || example.contextual.size() != config_.contextual_dim * n)
      throw DataError("example '" + example.id + "' lacks contextual vectors of width " +
                      std::to_string(config_.contextual_dim));
    in.contextual_p = Tensor::from({config_.contextual_dim, n}, example.contextual);
    in.contextual_a = ad::slice_cols(in.contextual_p, example.answer_start, example.answer_end);
  }

  Encoded enc;
  enc.word = dan_.word_level(in, dropout);
  enc.passage = dan_.contextual_level(in, enc.word, dropout);
  enc.graph = graph_mode_ == graph::GraphMode::kStatic
                  ? graph::build_static(example)
                  : graph::build_dynamic(enc.word.aligned_p, graph_projection_, config_.graph_k);
  enc.gnn = gnn_.encode(enc.graph, enc.passage, hops_);
  enc.context = decoder_.prepare(enc.gnn.node_states, batch.sources(i), batch.ext_vocab_size());
  enc.initial = decoder_.init_state(enc.gnn.graph_embedding, n);
  return enc;
}

decoder::StepOutput Graph2Seq::step(const Encoded& enc, const decoder::DecoderState& state,
                                    std::size_t prev_token) const {
  return decoder_.step(enc.context, state, prev_token);
}

ModelStepper::State ModelStepper::initial() const {
  return {encoded_.initial, data::Vocabulary::kSos, nullptr};
}

const decoder::StepOutput& ModelStepper::output(const State& state) const {
  if (!state.cache) {
    ad::NoGradGuard guard;
    state.cache = std::make_shared<decoder::StepOutput>(
        model_.step(encoded_, state.decoder, state.prev_token));
  }
  return *state.cache;
}

std::vector<double> ModelStepper::probs(const State& state) const {
  const auto values = output(state).distribution.values();
  return {values.begin(), values.end()};
}

ModelStepper::State ModelStepper::advance(const State& state, std::size_t token) const {
  return {output(state).next, token, nullptr};
}

decoder::Hypothesis greedy_decode(const Graph2Seq& model, const Encoded& encoded, std::size_t max_len) {
  ad::NoGradGuard guard;
  ModelStepper stepper(model, encoded);
  return decoder::greedy_search(stepper, data::Vocabulary::kEos, max_len);
}

decoder::Hypothesis beam_decode(const Graph2Seq& model, const Encoded& encoded, std::size_t width,
                                std::size_t max_len, bool length_normalize) {
  ad::NoGradGuard guard;
  ModelStepper stepper(model, encoded);
  return decoder::beam_search(stepper, data::Vocabulary::kEos, max_len, width, length_normalize);
}

std::vector<std::string> ids_to_words(const std::vector<std::size_t>& ids, const data::Batch& batch,
                                      const data::Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (std::size_t id : ids) out.push_back(batch.ext_word(id, vocab));
  return out;
}

}  // namespace qgen::model
