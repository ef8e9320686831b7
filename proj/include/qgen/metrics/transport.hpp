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

#include <vector>

namespace qgen::metrics {

struct TransportPlan {
  double cost = 0.0;
  std::vector<double> flow;  // supply.size() x demand.size(), row-major
};

// Exact balanced transportation problem: minimise sum_ij cost_ij f_ij with
// row sums = supply, column sums = demand, f >= 0. Supply and demand must be
// nonnegative with equal totals (1e-9 slack). Solved by successive shortest
// augmenting paths with Bellman-Ford on the residual network; intended for
// the small instances that come out of sentence comparisons.
TransportPlan solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                              const std::vector<double>& cost);

}  // namespace qgen::metrics
