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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qgen/common/real.hpp"

namespace qgen::ad {

// Every tensor is a dense row-major matrix. Column vectors are n x 1, scalars
// are 1 x 1. Sequences and node sets are stored one item per column.
struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  bool operator==(const Shape&) const = default;
  std::string str() const;
};

struct Node;
using NodePtr = std::shared_ptr<Node>;
using BackwardFn = std::function<void(Node& self)>;

// One recorded value. Inputs are retained only while gradient recording is on
// and at least one input requires a gradient.
struct Node {
  std::uint64_t id = 0;
  const char* op = "leaf";
  Shape shape;
  std::vector<Real> value;
  std::vector<Real> grad;
  bool requires_grad = false;
  bool is_leaf = true;
  std::vector<NodePtr> inputs;
  BackwardFn backward;

  // Sizes grad to match value (zero-filled) if it is not already.
  std::vector<Real>& ensure_grad();
};

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(NodePtr node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor filled(Shape shape, Real value);
  static Tensor from(Shape shape, std::vector<Real> values,
                     bool requires_grad = false);
  static Tensor scalar(Real value);
  static Tensor column(std::vector<Real> values);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rows() const { return node_->shape.rows; }
  std::size_t cols() const { return node_->shape.cols; }
  std::size_t size() const { return node_->shape.size(); }

  std::span<const Real> values() const { return node_->value; }
  // Direct write access; meant for leaves (parameter updates, perturbation in
  // finite-difference checks). Writing into a recorded intermediate does not
  // invalidate anything downstream.
  std::span<Real> mutable_values() { return node_->value; }
  Real item() const;
  Real at(std::size_t r, std::size_t c) const {
    return node_->value[r * node_->shape.cols + c];
  }

  bool requires_grad() const { return node_ && node_->requires_grad; }
  bool has_grad() const { return !node_->grad.empty(); }
  // Empty span when no gradient has been accumulated yet.
  std::span<const Real> grad() const { return node_->grad; }
  std::span<Real> mutable_grad() { return node_->ensure_grad(); }
  void zero_grad();
  // Drops the gradient buffer; has_grad() is false afterwards.
  void clear_grad();

  // Copy of the current value with no history.
  Tensor detach() const;
  std::vector<Real> to_vector() const {
    return {node_->value.begin(), node_->value.end()};
  }

  Node* node() const { return node_.get(); }
  const NodePtr& handle() const { return node_; }

 private:
  NodePtr node_;
};

// Gradient recording switch. Inference paths (greedy/beam search, evaluation)
// run under a guard so no history is kept.
bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Builds an op result. History is attached only when recording is enabled and
// some input requires a gradient; otherwise `backward` is dropped.
Tensor make_result(const char* op, Shape shape, std::vector<Real> value,
                   std::initializer_list<Tensor> inputs, BackwardFn backward);
Tensor make_result(const char* op, Shape shape, std::vector<Real> value,
                   std::span<const Tensor> inputs, BackwardFn backward);

std::uint64_t next_node_id();

}  // namespace qgen::ad
