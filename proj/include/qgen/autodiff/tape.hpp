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

#include <iosfwd>
#include <string>
#include <vector>

#include "qgen/autodiff/tensor.hpp"

namespace qgen::ad {

// Topologically ordered record of every gradient-carrying node that a result
// depends on. Built on demand from the result (define-by-run); node ids are
// assigned at creation, so ascending id order is a valid topological order.
class Tape {
 public:
  static Tape record(const Tensor& root);

  const std::vector<Node*>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  // One line per node: "#id op [r x c] <- #in ...".
  void dump(std::ostream& os) const;
  std::string dump() const;

 private:
  std::vector<Node*> nodes_;
};

// Reverse-mode sweep from a scalar loss. Gradients accumulate into every
// reachable leaf that requires them; intermediate gradients are reset first,
// so repeating the call on the same graph accumulates leaves exactly twice.
void backward(const Tensor& loss);

}  // namespace qgen::ad
