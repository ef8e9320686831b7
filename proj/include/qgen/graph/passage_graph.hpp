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

#include <string>
#include <vector>

#include "qgen/autodiff/ops.hpp"
#include "qgen/autodiff/tensor.hpp"
#include "qgen/data/example.hpp"
#include "json.hpp"

namespace qgen::graph {

enum class GraphMode { kStatic, kDynamic };

GraphMode parse_graph_mode(const std::string& name);
std::string graph_mode_name(GraphMode mode);

// Directed graph over passage tokens. Node v aggregates from incoming[v] and
// outgoing[v]; both lists are sorted and never contain v itself.
struct PassageGraph {
  GraphMode mode = GraphMode::kStatic;
  std::size_t num_nodes = 0;
  std::vector<std::vector<std::size_t>> incoming;
  std::vector<std::vector<std::size_t>> outgoing;

  // Dynamic graphs only.
  std::size_t k = 0;        // effective neighbourhood size after clamping
  ad::Tensor scores;        // N x N dense similarity
  ad::Mask kept;            // N x N row-major, 1 where the sparsified score survives
  ad::Tensor weights_in;    // N x N, row v normalised over kept entries of score row v
  ad::Tensor weights_out;   // N x N, same over the transposed support

  std::size_t edge_count() const;
  std::size_t kept_in_row(std::size_t row) const;
};

// Edges head -> dependent from the parse, plus last token of sentence i ->
// first token of sentence i+1. Self-loops and duplicates are dropped.
// Throws DataError when the example carries no dependency annotation.
PassageGraph build_static(const data::Example& example);
PassageGraph build_static(std::size_t num_nodes, const std::vector<data::DependencyEdge>& edges,
                          const std::vector<std::size_t>& sentence_starts);

// Row-wise top-k support of an N x N score matrix: the diagonal is always
// kept and the k - 1 largest off-diagonal entries join it (lower column wins
// ties). k must lie in [1, N].
ad::Mask top_k_mask(std::span<const Real> scores, std::size_t n, std::size_t k);

// Similarity A = (U H)^T (U H) with H the word-level passage matrix
// (F x N) and U a d x F projection; then top-k sparsification and softmax
// normalisation in both directions. k > N is clamped to N with a warning;
// k == 0 throws ConfigError.
PassageGraph build_dynamic(const ad::Tensor& word_level, const ad::Tensor& projection,
                           std::size_t k);

nlohmann::json graph_to_json(const PassageGraph& graph,
                             const std::vector<std::string>& tokens = {});
std::string graph_to_text(const PassageGraph& graph, const std::vector<std::string>& tokens = {});

}  // namespace qgen::graph
