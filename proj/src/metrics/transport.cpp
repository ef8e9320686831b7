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

#include "qgen/metrics/transport.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "qgen/common/error.hpp"

namespace qgen::metrics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-15;

struct Edge {
  std::size_t to;
  double cap;
  double cost;
  std::size_t rev;
};

struct Network {
  std::vector<std::vector<Edge>> adj;

  explicit Network(std::size_t n) : adj(n) {}
  void add(std::size_t from, std::size_t to, double cap, double cost) {
    adj[from].push_back({to, cap, cost, adj[to].size()});
    adj[to].push_back({from, 0.0, -cost, adj[from].size() - 1});
  }
};

}  // namespace

TransportPlan solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                              const std::vector<double>& cost) {
  const std::size_t m = supply.size(), n = demand.size();
  if (m == 0 || n == 0) throw DomainError("transport: empty side");
  if (cost.size() != m * n) throw DomainError("transport: cost matrix has wrong size");
  for (double s : supply)
    if (!(s >= 0.0)) throw DomainError("transport: negative supply");
  for (double d : demand)
    if (!(d >= 0.0)) throw DomainError("transport: negative demand");
  const double total = std::accumulate(supply.begin(), supply.end(), 0.0);
  if (std::fabs(total - std::accumulate(demand.begin(), demand.end(), 0.0)) > 1e-9)
    throw DomainError("transport: supply and demand totals differ");

  // Nodes: 0 source, 1..m supply, m+1..m+n demand, m+n+1 sink.
  const std::size_t source = 0, sink = m + n + 1;
  Network net(m + n + 2);
  for (std::size_t i = 0; i < m; ++i) net.add(source, 1 + i, supply[i], 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) net.add(1 + i, 1 + m + j, kInf, cost[i * n + j]);
  for (std::size_t j = 0; j < n; ++j) net.add(1 + m + j, sink, demand[j], 0.0);

  double remaining = total;
  const std::size_t nodes = net.adj.size();
  while (remaining > 1e-12) {
    std::vector<double> dist(nodes, kInf);
    std::vector<std::size_t> prev_node(nodes, nodes), prev_edge(nodes, 0);
    dist[source] = 0.0;
    for (std::size_t round = 0; round + 1 < nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (dist[u] == kInf) continue;
        for (std::size_t e = 0; e < net.adj[u].size(); ++e) {
          const Edge& edge = net.adj[u][e];
          if (edge.cap <= kTiny) continue;
          const double nd = dist[u] + edge.cost;
          if (nd < dist[edge.to] - 1e-15) {
            dist[edge.to] = nd;
            prev_node[edge.to] = u;
            prev_edge[edge.to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == kInf) break;  // leftover is below tolerance
    double push = kInf;
    for (std::size_t v = sink; v != source; v = prev_node[v])
      push = std::min(push, net.adj[prev_node[v]][prev_edge[v]].cap);
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      Edge& e = net.adj[prev_node[v]][prev_edge[v]];
      e.cap -= push;
      net.adj[v][e.rev].cap += push;
    }
    remaining -= push;
  }

  TransportPlan plan;
  plan.flow.assign(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (const Edge& e : net.adj[1 + i]) {
      if (e.to <= m || e.to == sink) continue;
      const std::size_t j = e.to - 1 - m;
      // Flow on a forward edge equals the capacity of its reverse edge.
      const double f = net.adj[e.to][e.rev].cap;
      plan.flow[i * n + j] = f;
      plan.cost += f * cost[i * n + j];
    }
  return plan;
}

}  // namespace qgen::metrics
