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

#include "qgen/gnn/biggnn.hpp"

#include "qgen/autodiff/ops.hpp"
#include "qgen/common/error.hpp"

namespace qgen::gnn {

using ad::Tensor;
using graph::GraphMode;
using graph::PassageGraph;

namespace {

void check_states(const PassageGraph& graph, const Tensor& states) {
  if (states.cols() != graph.num_nodes)
    throw ShapeError("aggregate: " + std::to_string(states.cols()) + " node columns for a graph of " +
                     std::to_string(graph.num_nodes) + " nodes");
}

}  // namespace

Tensor aggregate_mean(const PassageGraph& graph, const Tensor& states, Neighbours side) {
  check_states(graph, states);
  const std::size_t n = graph.num_nodes;
  const auto& lists = side == Neighbours::kIncoming ? graph.incoming : graph.outgoing;
  // Transposed averaging matrix: column v holds the weights of node v's mean.
  std::vector<Real> m(n * n, Real(0));
  for (std::size_t v = 0; v < n; ++v) {
    const Real w = Real(1) / static_cast<Real>(lists[v].size() + 1);
    m[v * n + v] = w;
    for (std::size_t u : lists[v]) m[u * n + v] += w;
  }
  return ad::matmul(states, Tensor::from({n, n}, std::move(m)));
}

Tensor aggregate_weighted(const PassageGraph& graph, const Tensor& states, Neighbours side) {
  check_states(graph, states);
  if (graph.mode != GraphMode::kDynamic)
    throw ConfigError("aggregate_weighted needs a dynamic graph");
  const Tensor& w = side == Neighbours::kIncoming ? graph.weights_in : graph.weights_out;
  return ad::matmul(states, ad::transpose(w));
}

Tensor aggregate(const PassageGraph& graph, const Tensor& states, Neighbours side) {
  return graph.mode == GraphMode::kDynamic ? aggregate_weighted(graph, states, side)
                                           : aggregate_mean(graph, states, side);
}

FuseParams FuseParams::create(ad::ParameterStore& store, const std::string& prefix,
                              std::size_t width, Rng& rng) {
  FuseParams p;
  p.w = store.add(prefix + ".w", {width, 4 * width}, ad::Init::kUniformFanIn, rng);
  p.bias = store.add(prefix + ".bias", {width, 1}, ad::Init::kZeros, rng);
  return p;
}

Tensor fuse(const FuseParams& params, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) throw ShapeError("fuse: operand shapes differ");
  Tensor features = ad::concat_rows({a, b, ad::mul(a, b), ad::sub(a, b)});
  Tensor z = ad::sigmoid(ad::add_column(ad::matmul(params.w, features), params.bias));
  // (1 - z) * a + z * b  ==  a + z * (b - a)
  return ad::add(a, ad::mul(z, ad::sub(b, a)));
}

DirectionMode parse_direction(const std::string& name) {
  if (name == "bi" || name == "bidirectional") return DirectionMode::kBidirectional;
  if (name == "forward" || name == "fw") return DirectionMode::kForward;
  if (name == "backward" || name == "bw") return DirectionMode::kBackward;
  throw ConfigError("unknown gnn direction '" + name + "' (expected bi, forward or backward)");
}

FusionMode parse_fusion(const std::string& name) {
  if (name == "interleaved" || name == "fuse") return FusionMode::kInterleaved;
  if (name == "concat") return FusionMode::kConcat;
  throw ConfigError("unknown gnn fusion '" + name + "' (expected interleaved or concat)");
}

std::string direction_name(DirectionMode mode) {
  switch (mode) {
    case DirectionMode::kBidirectional: return "bi";
    case DirectionMode::kForward: return "forward";
    case DirectionMode::kBackward: return "backward";
  }
  return "bi";
}

std::string fusion_name(FusionMode mode) {
  return mode == FusionMode::kInterleaved ? "interleaved" : "concat";
}

BiGGNN::BiGGNN(ad::ParameterStore& store, const BiGGNNOptions& options, Rng& rng)
    : options_(options) {
  const std::size_t f = options.node_dim;
  const bool concat = options.fusion == FusionMode::kConcat &&
                      options.direction == DirectionMode::kBidirectional;
  if (options.direction == DirectionMode::kBidirectional && !concat)
    fuse_ = FuseParams::create(store, "gnn.fuse", f, rng);
  gru_ = layers::GRUCellParams::create(store, "gnn.gru", f, f, rng);
  if (concat) {
    gru_backward_ = layers::GRUCellParams::create(store, "gnn.gru_backward", f, f, rng);
    concat_w_ = store.add("gnn.concat.w", {f, 2 * f}, ad::Init::kUniformFanIn, rng);
    concat_b_ = store.add("gnn.concat.bias", {f, 1}, ad::Init::kZeros, rng);
  }
  pool_w_ = store.add("gnn.pool.w", {options.graph_dim, f}, ad::Init::kUniformFanIn, rng);
  pool_b_ = store.add("gnn.pool.bias", {options.graph_dim, 1}, ad::Init::kZeros, rng);
}

EncoderOutput BiGGNN::encode(const PassageGraph& graph, const Tensor& nodes,
                             std::size_t hops) const {
  if (nodes.rows() != options_.node_dim)
    throw ShapeError("BiGGNN: node features have " + std::to_string(nodes.rows()) +
                     " rows, expected " + std::to_string(options_.node_dim));
  if (nodes.cols() != graph.num_nodes)
    throw ShapeError("BiGGNN: node count does not match graph");
  EncoderOutput out;
  out.hops.push_back(nodes);
  Tensor h = nodes;

  const bool concat = options_.fusion == FusionMode::kConcat &&
                      options_.direction == DirectionMode::kBidirectional;
  if (concat) {
    // Forward chain reads outgoing neighbours, backward chain incoming ones;
    // the two only meet after the last hop.
    Tensor hf = nodes, hb = nodes;
    for (std::size_t k = 0; k < hops; ++k) {
      Tensor agg_f = aggregate(graph, hf, Neighbours::kOutgoing);
      Tensor agg_b = aggregate(graph, hb, Neighbours::kIncoming);
      hf = layers::gru_step(gru_, agg_f, hf);
      hb = layers::gru_step(gru_backward_, agg_b, hb);
      out.hops.push_back(ad::concat_rows({hf, hb}));
    }
    h = hops == 0 ? nodes
                  : ad::add_column(ad::matmul(concat_w_, ad::concat_rows({hf, hb})), concat_b_);
  } else {
    for (std::size_t k = 0; k < hops; ++k) {
      Tensor message;
      switch (options_.direction) {
        case DirectionMode::kBidirectional:
          message = fuse(fuse_, aggregate(graph, h, Neighbours::kIncoming),
                         aggregate(graph, h, Neighbours::kOutgoing));
          break;
        case DirectionMode::kForward:
          message = aggregate(graph, h, Neighbours::kOutgoing);
          break;
        case DirectionMode::kBackward:
          message = aggregate(graph, h, Neighbours::kIncoming);
          break;
      }
      h = layers::gru_step(gru_, message, h);
      out.hops.push_back(h);
    }
  }
  out.node_states = h;
  out.graph_embedding = ad::max_over_cols(ad::add_column(ad::matmul(pool_w_, h), pool_b_));
  return out;
}

}  // namespace qgen::gnn
