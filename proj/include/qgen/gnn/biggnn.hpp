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

#include "qgen/autodiff/parameter.hpp"
#include "qgen/autodiff/tensor.hpp"
#include "qgen/graph/passage_graph.hpp"
#include "qgen/layers/recurrent.hpp"

namespace qgen::gnn {

// Which neighbour set feeds an aggregation: incoming[v] produces the
// backward vector, outgoing[v] the forward one.
enum class Neighbours { kIncoming, kOutgoing };

// Mean over {v} plus its neighbours, for every node (static graphs).
ad::Tensor aggregate_mean(const graph::PassageGraph& graph, const ad::Tensor& states,
                          Neighbours side);
// Weighted sum with the normalised dynamic-graph weights; the self entry is
// part of the weights already.
ad::Tensor aggregate_weighted(const graph::PassageGraph& graph, const ad::Tensor& states,
                              Neighbours side);
// Dispatches on graph.mode.
ad::Tensor aggregate(const graph::PassageGraph& graph, const ad::Tensor& states, Neighbours side);

// Gated fusion of two aggregation vectors per column:
//   z = sigmoid(W [a; b; a*b; a-b] + bias),   out = (1 - z) * a + z * b
struct FuseParams {
  ad::Tensor w;     // F x 4F
  ad::Tensor bias;  // F x 1
  static FuseParams create(ad::ParameterStore& store, const std::string& prefix, std::size_t width,
                           Rng& rng);
};
ad::Tensor fuse(const FuseParams& params, const ad::Tensor& a, const ad::Tensor& b);

enum class DirectionMode { kBidirectional, kForward, kBackward };
enum class FusionMode { kInterleaved, kConcat };

DirectionMode parse_direction(const std::string& name);
FusionMode parse_fusion(const std::string& name);
std::string direction_name(DirectionMode mode);
std::string fusion_name(FusionMode mode);

struct BiGGNNOptions {
  std::size_t node_dim = 300;   // input / state width
  std::size_t graph_dim = 300;  // width of the pooled graph vector
  DirectionMode direction = DirectionMode::kBidirectional;
  FusionMode fusion = FusionMode::kInterleaved;
};

struct EncoderOutput {
  ad::Tensor node_states;      // node_dim x N after the last hop
  ad::Tensor graph_embedding;  // graph_dim x 1
  std::vector<ad::Tensor> hops;  // states after each hop (hops[0] is the input)
};

// Gated graph network run for a fixed number of hops with parameters shared
// across hops, followed by a linear projection and max pooling over nodes.
class BiGGNN {
 public:
  BiGGNN() = default;
  BiGGNN(ad::ParameterStore& store, const BiGGNNOptions& options, Rng& rng);

  EncoderOutput encode(const graph::PassageGraph& graph, const ad::Tensor& nodes,
                       std::size_t hops) const;

  const BiGGNNOptions& options() const { return options_; }

 private:
  BiGGNNOptions options_;
  FuseParams fuse_;
  layers::GRUCellParams gru_;
  layers::GRUCellParams gru_backward_;  // concat fusion only: separate backward chain
  ad::Tensor concat_w_;                 // concat fusion only: node_dim x 2 node_dim
  ad::Tensor concat_b_;
  ad::Tensor pool_w_;  // graph_dim x node_dim
  ad::Tensor pool_b_;
};

}  // namespace qgen::gnn
