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

#include "qgen/autodiff/tape.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "qgen/common/error.hpp"

namespace qgen::ad {

Tape Tape::record(const Tensor& root) {
  Tape tape;
  if (!root.defined() || !root.requires_grad()) return tape;
  std::unordered_set<Node*> seen;
  std::vector<Node*> stack{root.node()};
  seen.insert(root.node());
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    tape.nodes_.push_back(n);
    for (const auto& in : n->inputs) {
      if (!in->requires_grad) continue;
      if (seen.insert(in.get()).second) stack.push_back(in.get());
    }
  }
  std::sort(tape.nodes_.begin(), tape.nodes_.end(),
            [](const Node* a, const Node* b) { return a->id < b->id; });
  return tape;
}

void Tape::dump(std::ostream& os) const {
  for (const Node* n : nodes_) {
    os << '#' << n->id << ' ' << n->op << ' ' << n->shape.str();
    if (!n->inputs.empty()) {
      os << " <-";
      for (const auto& in : n->inputs) os << " #" << in->id;
    }
    os << '\n';
  }
}

std::string Tape::dump() const {
  std::ostringstream os;
  dump(os);
  return os.str();
}

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw ShapeError("backward: loss must be a scalar, got " +
                     (loss.defined() ? loss.shape().str() : std::string("undefined")));
  }
  Tape tape = Tape::record(loss);
  if (tape.empty()) return;
  for (Node* n : tape.nodes()) {
    if (!n->is_leaf) n->grad.assign(n->value.size(), Real(0));
  }
  loss.node()->ensure_grad()[0] += Real(1);
  const auto& nodes = tape.nodes();
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    Node* n = *it;
    if (!n->is_leaf && n->backward) n->backward(*n);
  }
}

}  // namespace qgen::ad
