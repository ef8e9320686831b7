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

#include <cstdint>
#include <span>
#include <vector>

#include "qgen/autodiff/tensor.hpp"
#include "qgen/common/rng.hpp"

namespace qgen::ad {

// Validity mask for softmax/attention: nonzero marks a usable entry.
using Mask = std::vector<std::uint8_t>;

Tensor matmul(const Tensor& a, const Tensor& b);

enum class ElementwiseOp {
  kAdd,
  kSub,
  kMul,
  kMin,
  kRelu,
  kSigmoid,
  kTanh,
  kExp,
  kLog,
};

// Binary kinds need equal shapes; unary kinds ignore `b`. kLog throws
// DomainError on non-positive input.
Tensor elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b = {});

inline Tensor add(const Tensor& a, const Tensor& b) { return elementwise(ElementwiseOp::kAdd, a, b); }
inline Tensor sub(const Tensor& a, const Tensor& b) { return elementwise(ElementwiseOp::kSub, a, b); }
inline Tensor mul(const Tensor& a, const Tensor& b) { return elementwise(ElementwiseOp::kMul, a, b); }
inline Tensor minimum(const Tensor& a, const Tensor& b) { return elementwise(ElementwiseOp::kMin, a, b); }
inline Tensor relu(const Tensor& a) { return elementwise(ElementwiseOp::kRelu, a); }
inline Tensor sigmoid(const Tensor& a) { return elementwise(ElementwiseOp::kSigmoid, a); }
inline Tensor tanh(const Tensor& a) { return elementwise(ElementwiseOp::kTanh, a); }
inline Tensor exp(const Tensor& a) { return elementwise(ElementwiseOp::kExp, a); }
inline Tensor log(const Tensor& a) { return elementwise(ElementwiseOp::kLog, a); }

// a + column broadcast over every column of a; column is rows x 1.
Tensor add_column(const Tensor& a, const Tensor& column);
// scale * a + shift.
Tensor affine(const Tensor& a, Real scale, Real shift = Real(0));
inline Tensor scale(const Tensor& a, Real s) { return affine(a, s, Real(0)); }
// Scales every entry of `a` by the 1 x 1 tensor `s`.
Tensor scale_by(const Tensor& a, const Tensor& s);
// max(a, floor) elementwise; clamped entries get no gradient.
Tensor clamp_min(const Tensor& a, Real floor);

Tensor sum(const Tensor& a);
Tensor transpose(const Tensor& a);

Tensor concat_rows(std::span<const Tensor> parts);
Tensor concat_cols(std::span<const Tensor> parts);
inline Tensor concat_rows(std::initializer_list<Tensor> parts) {
  return concat_rows(std::span<const Tensor>(parts.begin(), parts.size()));
}
inline Tensor concat_cols(std::initializer_list<Tensor> parts) {
  return concat_cols(std::span<const Tensor>(parts.begin(), parts.size()));
}
Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t end);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end);
inline Tensor column(const Tensor& a, std::size_t j) { return slice_cols(a, j, j + 1); }

// Columns of `table` selected by index (embedding lookup).
Tensor gather_cols(const Tensor& table, std::span<const std::size_t> indices);
// out (out_rows x 1) with out[indices[i]] += src[i]; src is n x 1.
Tensor scatter_add_rows(const Tensor& src, std::span<const std::size_t> indices,
                        std::size_t out_rows);
Tensor pick(const Tensor& a, std::size_t row, std::size_t col);

// Row-wise maximum across columns (rows x 1). Ties go to the lowest column.
Tensor max_over_cols(const Tensor& a);

// Softmax along `axis`: axis 1 normalizes each row across its columns, axis 0
// each column across its rows. Masked entries (mask value 0) are excluded
// before exponentiation and come out exactly zero. A slice with no valid
// entry raises DomainError. An empty mask means "all valid".
Tensor softmax(const Tensor& a, int axis, const Mask& mask = {});

// Dropout with one mask per feature row, shared across all columns (time
// steps / nodes). Identity when not training or rate == 0.
Tensor variational_dropout(const Tensor& a, Real rate, bool training, Rng& rng);

}  // namespace qgen::ad
