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

#include "qgen/autodiff/tensor.hpp"

#include <algorithm>
#include <atomic>

#include "qgen/common/error.hpp"

namespace qgen::ad {
namespace {
std::atomic<std::uint64_t> g_next_id{1};
thread_local bool t_grad_enabled = true;

NodePtr new_node(Shape shape, std::vector<Real> values, bool requires_grad) {
  if (values.size() != shape.size()) {
    throw ShapeError("tensor value count " + std::to_string(values.size()) +
                     " does not match shape " + shape.str());
  }
  auto node = std::make_shared<Node>();
  node->id = next_node_id();
  node->shape = shape;
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return node;
}
}  // namespace

std::string Shape::str() const {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

std::vector<Real>& Node::ensure_grad() {
  if (grad.size() != value.size()) grad.assign(value.size(), Real(0));
  return grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  return Tensor(new_node(shape, std::vector<Real>(shape.size(), Real(0)),
                         requires_grad));
}

Tensor Tensor::filled(Shape shape, Real value) {
  return Tensor(new_node(shape, std::vector<Real>(shape.size(), value), false));
}

Tensor Tensor::from(Shape shape, std::vector<Real> values, bool requires_grad) {
  return Tensor(new_node(shape, std::move(values), requires_grad));
}

Tensor Tensor::scalar(Real value) { return from({1, 1}, {value}); }

Tensor Tensor::column(std::vector<Real> values) {
  Shape s{values.size(), 1};
  return from(s, std::move(values));
}

Real Tensor::item() const {
  if (size() != 1) throw ShapeError("item() on non-scalar " + shape().str());
  return node_->value[0];
}

void Tensor::zero_grad() {
  if (!node_->grad.empty()) std::fill(node_->grad.begin(), node_->grad.end(), Real(0));
}

void Tensor::clear_grad() {
  node_->grad.clear();
  node_->grad.shrink_to_fit();
}

Tensor Tensor::detach() const {
  return Tensor(new_node(shape(), node_->value, false));
}

bool grad_enabled() { return t_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

std::uint64_t next_node_id() { return g_next_id.fetch_add(1, std::memory_order_relaxed); }

Tensor make_result(const char* op, Shape shape, std::vector<Real> value,
                   std::span<const Tensor> inputs, BackwardFn backward) {
  auto node = new_node(shape, std::move(value), false);
  node->op = op;
  node->is_leaf = false;
  if (t_grad_enabled) {
    bool any = std::any_of(inputs.begin(), inputs.end(),
                           [](const Tensor& t) { return t.requires_grad(); });
    if (any) {
      node->requires_grad = true;
      node->inputs.reserve(inputs.size());
      for (const auto& t : inputs) node->inputs.push_back(t.handle());
      node->backward = std::move(backward);
    }
  }
  return Tensor(std::move(node));
}

Tensor make_result(const char* op, Shape shape, std::vector<Real> value,
                   std::initializer_list<Tensor> inputs, BackwardFn backward) {
  return make_result(op, shape, std::move(value),
                     std::span<const Tensor>(inputs.begin(), inputs.size()),
                     std::move(backward));
}

}  // namespace qgen::ad
