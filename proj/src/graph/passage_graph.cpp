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

#include "qgen/graph/passage_graph.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "qgen/common/error.hpp"
#include "qgen/common/log.hpp"

namespace qgen::graph {

GraphMode parse_graph_mode(const std::string& name) {
  if (name == "static" || name == "syntax") return GraphMode::kStatic;
  if (name == "dynamic" || name == "semantic") return GraphMode::kDynamic;
  throw ConfigError("unknown graph type '" + name + "' (expected static or dynamic)");
}

std::string graph_mode_name(GraphMode mode) {
  return mode == GraphMode::kStatic ? "static" : "dynamic";
}

std::size_t PassageGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& in : incoming) n += in.size();
  return n;
}

std::size_t PassageGraph::kept_in_row(std::size_t row) const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < num_nodes; ++c) n += kept[row * num_nodes + c] ? 1 : 0;
  return n;
}

PassageGraph build_static(const data::Example& example) {
  if (!example.dependency_edges)
    throw DataError("example '" + example.id +
                    "' has no dependency parse; a static graph needs one (try the dynamic graph)");
  return build_static(example.passage_length(), *example.dependency_edges, example.sentence_starts);
}

PassageGraph build_static(std::size_t num_nodes, const std::vector<data::DependencyEdge>& edges,
                          const std::vector<std::size_t>& sentence_starts) {
  if (num_nodes == 0) throw DataError("static graph: empty passage");
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (const auto& e : edges) {
    if (e.head >= num_nodes || e.dependent >= num_nodes)
      throw DataError("static graph: edge " + std::to_string(e.head) + "->" +
                      std::to_string(e.dependent) + " outside passage of " +
                      std::to_string(num_nodes) + " tokens");
    if (e.head != e.dependent) unique.emplace(e.head, e.dependent);
  }
  for (std::size_t i = 1; i < sentence_starts.size(); ++i) {
    const std::size_t first = sentence_starts[i];
    if (first == 0 || first >= num_nodes || first <= sentence_starts[i - 1])
      throw DataError("static graph: bad sentence start " + std::to_string(first));
    unique.emplace(first - 1, first);
  }
  PassageGraph g;
  g.mode = GraphMode::kStatic;
  g.num_nodes = num_nodes;
  g.incoming.assign(num_nodes, {});
  g.outgoing.assign(num_nodes, {});
  for (const auto& [from, to] : unique) {
    g.outgoing[from].push_back(to);
    g.incoming[to].push_back(from);
  }
  for (auto& l : g.incoming) std::sort(l.begin(), l.end());
  return g;
}

ad::Mask top_k_mask(std::span<const Real> scores, std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw ConfigError("top_k_mask: k must lie in [1, N]");
  if (scores.size() != n * n) throw ShapeError("top_k_mask: score matrix is not N x N");
  ad::Mask mask(n * n, 0);
  std::vector<std::size_t> order(n);
  for (std::size_t r = 0; r < n; ++r) {
    const Real* row = scores.data() + r * n;
    mask[r * n + r] = 1;
    order.clear();
    for (std::size_t c = 0; c < n; ++c)
      if (c != r) order.push_back(c);
    std::stable_sort(order.begin(), order.end(),
                     [row](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    for (std::size_t i = 0; i + 1 < k; ++i) mask[r * n + order[i]] = 1;
  }
  return mask;
}

PassageGraph build_dynamic(const ad::Tensor& word_level, const ad::Tensor& projection,
                           std::size_t k) {
  if (k == 0) throw ConfigError("dynamic graph: k must be positive");
  const std::size_t n = word_level.cols();
  if (n == 0) throw DataError("dynamic graph: empty passage");
  if (k > n) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      log::warn("dynamic graph: k=", k, " exceeds passage length ", n,
                "; clamping to the passage length (reported once)");
    k = n;
  }
  PassageGraph g;
  g.mode = GraphMode::kDynamic;
  g.num_nodes = n;
  g.k = k;
  ad::Tensor projected = ad::matmul(projection, word_level);
  g.scores = ad::matmul(ad::transpose(projected), projected);
  g.kept = top_k_mask(g.scores.values(), n, k);
  ad::Mask kept_t(n * n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) kept_t[c * n + r] = g.kept[r * n + c];
  g.weights_in = ad::softmax(g.scores, 1, g.kept);
  g.weights_out = ad::softmax(ad::transpose(g.scores), 1, kept_t);
  g.incoming.assign(n, {});
  g.outgoing.assign(n, {});
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (r == c) continue;
      if (g.kept[r * n + c]) g.incoming[r].push_back(c);
      if (kept_t[r * n + c]) g.outgoing[r].push_back(c);
    }
  return g;
}

namespace {

std::string label(std::size_t i, const std::vector<std::string>& tokens) {
  if (i < tokens.size()) return std::to_string(i) + ":" + tokens[i];
  return std::to_string(i);
}

}  // namespace

nlohmann::json graph_to_json(const PassageGraph& graph, const std::vector<std::string>& tokens) {
  nlohmann::json j;
  j["type"] = graph_mode_name(graph.mode);
  j["num_nodes"] = graph.num_nodes;
  if (!tokens.empty()) j["tokens"] = tokens;
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t v = 0; v < graph.num_nodes; ++v)
    for (std::size_t u : graph.incoming[v]) {
      nlohmann::json e = {{"from", u}, {"to", v}};
      if (graph.mode == GraphMode::kDynamic) {
        e["score"] = graph.scores.at(v, u);
        e["weight"] = graph.weights_in.at(v, u);
      }
      edges.push_back(std::move(e));
    }
  j["edges"] = std::move(edges);
  if (graph.mode == GraphMode::kDynamic) {
    j["k"] = graph.k;
    nlohmann::json self = nlohmann::json::array();
    for (std::size_t v = 0; v < graph.num_nodes; ++v) self.push_back(graph.weights_in.at(v, v));
    j["self_weights"] = std::move(self);
  }
  return j;
}

std::string graph_to_text(const PassageGraph& graph, const std::vector<std::string>& tokens) {
  std::ostringstream os;
  os << graph_mode_name(graph.mode) << " graph, " << graph.num_nodes << " nodes, "
     << graph.edge_count() << " edges\n";
  for (std::size_t v = 0; v < graph.num_nodes; ++v) {
    os << label(v, tokens) << " <-";
    for (std::size_t u : graph.incoming[v]) {
      os << ' ' << label(u, tokens);
      if (graph.mode == GraphMode::kDynamic) os << '(' << graph.weights_in.at(v, u) << ')';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qgen::graph
