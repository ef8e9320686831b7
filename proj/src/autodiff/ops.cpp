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

#include "qgen/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qgen/common/error.hpp"

namespace qgen::ad {
namespace {

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape().str() +
                     " vs " + b.shape().str());
  }
}

bool wants(const Node& self, std::size_t i) { return self.inputs[i]->requires_grad; }

// c[m x n] += a[m x k] * b[k x n]; optional transposes read the stored
// matrices as their transposes.
void gemm_acc(const Real* a, bool ta, const Real* b, bool tb, Real* c,
              std::size_t m, std::size_t k, std::size_t n) {
  // Stored shapes: a is (ta ? k x m : m x k), b is (tb ? n x k : k x n).
  for (std::size_t i = 0; i < m; ++i) {
    Real* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const Real av = ta ? a[p * m + i] : a[i * k + p];
      if (av == Real(0)) continue;
      if (!tb) {
        const Real* brow = b + p * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
      } else {
        for (std::size_t j = 0; j < n; ++j) crow[j] += av * b[j * k + p];
      }
    }
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions disagree " + a.shape().str() +
                     " x " + b.shape().str());
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<Real> out(m * n, Real(0));
  gemm_acc(a.values().data(), false, b.values().data(), false, out.data(), m, k, n);
  return make_result("matmul", {m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    const auto& A = self.inputs[0];
    const auto& B = self.inputs[1];
    if (A->requires_grad) {
      // dA = dC * B^T
      gemm_acc(self.grad.data(), false, B->value.data(), true,
               A->ensure_grad().data(), m, n, k);
    }
    if (B->requires_grad) {
      // dB = A^T * dC
      gemm_acc(A->value.data(), true, self.grad.data(), false,
               B->ensure_grad().data(), k, m, n);
    }
  });
}

Tensor elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b) {
  const auto& av = a.values();
  const std::size_t n = a.size();
  std::vector<Real> out(n);
  switch (op) {
    case ElementwiseOp::kAdd:
    case ElementwiseOp::kSub:
    case ElementwiseOp::kMul:
    case ElementwiseOp::kMin: {
      if (!b.defined()) throw ShapeError("elementwise: binary op needs two operands");
      require_same_shape("elementwise", a, b);
      const auto& bv = b.values();
      if (op == ElementwiseOp::kAdd) {
        for (std::size_t i = 0; i < n; ++i) out[i] = av[i] + bv[i];
        return make_result("add", a.shape(), std::move(out), {a, b}, [](Node& self) {
          for (std::size_t in = 0; in < 2; ++in) {
            if (!wants(self, in)) continue;
            auto& g = self.inputs[in]->ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
          }
        });
      }
      if (op == ElementwiseOp::kSub) {
        for (std::size_t i = 0; i < n; ++i) out[i] = av[i] - bv[i];
        return make_result("sub", a.shape(), std::move(out), {a, b}, [](Node& self) {
          if (wants(self, 0)) {
            auto& g = self.inputs[0]->ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
          }
          if (wants(self, 1)) {
            auto& g = self.inputs[1]->ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i];
          }
        });
      }
      if (op == ElementwiseOp::kMul) {
        for (std::size_t i = 0; i < n; ++i) out[i] = av[i] * bv[i];
        return make_result("mul", a.shape(), std::move(out), {a, b}, [](Node& self) {
          const auto& x = self.inputs[0]->value;
          const auto& y = self.inputs[1]->value;
          if (wants(self, 0)) {
            auto& g = self.inputs[0]->ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * y[i];
          }
          if (wants(self, 1)) {
            auto& g = self.inputs[1]->ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * x[i];
          }
        });
      }
      // kMin: ties route the gradient to the first operand.
      for (std::size_t i = 0; i < n; ++i) out[i] = std::min(av[i], bv[i]);
      return make_result("min", a.shape(), std::move(out), {a, b}, [](Node& self) {
        const auto& x = self.inputs[0]->value;
        const auto& y = self.inputs[1]->value;
        if (wants(self, 0)) {
          auto& g = self.inputs[0]->ensure_grad();
          for (std::size_t i = 0; i < g.size(); ++i)
            if (x[i] <= y[i]) g[i] += self.grad[i];
        }
        if (wants(self, 1)) {
          auto& g = self.inputs[1]->ensure_grad();
          for (std::size_t i = 0; i < g.size(); ++i)
            if (x[i] > y[i]) g[i] += self.grad[i];
        }
      });
    }
    case ElementwiseOp::kRelu:
      for (std::size_t i = 0; i < n; ++i) out[i] = av[i] > Real(0) ? av[i] : Real(0);
      return make_result("relu", a.shape(), std::move(out), {a}, [](Node& self) {
        const auto& x = self.inputs[0]->value;
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i)
          if (x[i] > Real(0)) g[i] += self.grad[i];
      });
    case ElementwiseOp::kSigmoid:
      for (std::size_t i = 0; i < n; ++i) {
        // Split by sign so exp never overflows.
        const Real x = av[i];
        if (x >= 0) {
          out[i] = Real(1) / (Real(1) + std::exp(-x));
        } else {
          const Real e = std::exp(x);
          out[i] = e / (Real(1) + e);
        }
      }
      return make_result("sigmoid", a.shape(), std::move(out), {a}, [](Node& self) {
        const auto& y = self.value;
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * y[i] * (Real(1) - y[i]);
      });
    case ElementwiseOp::kTanh:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(av[i]);
      return make_result("tanh", a.shape(), std::move(out), {a}, [](Node& self) {
        const auto& y = self.value;
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * (Real(1) - y[i] * y[i]);
      });
    case ElementwiseOp::kExp:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(av[i]);
      return make_result("exp", a.shape(), std::move(out), {a}, [](Node& self) {
        const auto& y = self.value;
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * y[i];
      });
    case ElementwiseOp::kLog:
      for (std::size_t i = 0; i < n; ++i) {
        if (!(av[i] > Real(0))) {
          throw DomainError("log: non-positive input " + std::to_string(av[i]) +
                            " at index " + std::to_string(i));
        }
        out[i] = std::log(av[i]);
      }
      return make_result("log", a.shape(), std::move(out), {a}, [](Node& self) {
        const auto& x = self.inputs[0]->value;
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] / x[i];
      });
  }
  throw ShapeError("elementwise: unknown op");
}

Tensor add_column(const Tensor& a, const Tensor& column) {
  if (column.cols() != 1 || column.rows() != a.rows()) {
    throw ShapeError("add_column: cannot broadcast " + column.shape().str() +
                     " over " + a.shape().str());
  }
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<Real> out(a.values().begin(), a.values().end());
  const auto& cv = column.values();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] += cv[i];
  return make_result("add_column", a.shape(), std::move(out), {a, column},
                     [r, c](Node& self) {
                       if (wants(self, 0)) {
                         auto& g = self.inputs[0]->ensure_grad();
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                       }
                       if (wants(self, 1)) {
                         auto& g = self.inputs[1]->ensure_grad();
                         for (std::size_t i = 0; i < r; ++i)
                           for (std::size_t j = 0; j < c; ++j) g[i] += self.grad[i * c + j];
                       }
                     });
}

Tensor affine(const Tensor& a, Real scale, Real shift) {
  std::vector<Real> out(a.size());
  const auto& av = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * av[i] + shift;
  return make_result("affine", a.shape(), std::move(out), {a}, [scale](Node& self) {
    auto& g = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * self.grad[i];
  });
}

Tensor scale_by(const Tensor& a, const Tensor& s) {
  if (s.size() != 1) throw ShapeError("scale_by: factor must be 1x1, got " + s.shape().str());
  const Real k = s.values()[0];
  std::vector<Real> out(a.size());
  const auto& av = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = k * av[i];
  return make_result("scale_by", a.shape(), std::move(out), {a, s}, [](Node& self) {
    const auto& x = self.inputs[0]->value;
    const Real k = self.inputs[1]->value[0];
    if (wants(self, 0)) {
      auto& g = self.inputs[0]->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += k * self.grad[i];
    }
    if (wants(self, 1)) {
      Real acc = 0;
      for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * self.grad[i];
      self.inputs[1]->ensure_grad()[0] += acc;
    }
  });
}

Tensor clamp_min(const Tensor& a, Real floor) {
  std::vector<Real> out(a.size());
  const auto& av = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(av[i], floor);
  return make_result("clamp_min", a.shape(), std::move(out), {a}, [floor](Node& self) {
    const auto& x = self.inputs[0]->value;
    auto& g = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] >= floor) g[i] += self.grad[i];
  });
}

Tensor sum(const Tensor& a) {
  Real total = 0;
  for (Real v : a.values()) total += v;
  return make_result("sum", {1, 1}, {total}, {a}, [](Node& self) {
    auto& g = self.inputs[0]->ensure_grad();
    const Real d = self.grad[0];
    for (auto& v : g) v += d;
  });
}

Tensor transpose(const Tensor& a) {
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<Real> out(r * c);
  const auto& av = a.values();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = av[i * c + j];
  return make_result("transpose", {c, r}, std::move(out), {a}, [r, c](Node& self) {
    auto& g = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += self.grad[j * r + i];
  });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  const std::size_t c = parts[0].cols();
  std::size_t r = 0;
  for (const auto& p : parts) {
    if (p.cols() != c) {
      throw ShapeError("concat_rows: column mismatch " + parts[0].shape().str() +
                       " vs " + p.shape().str());
    }
    r += p.rows();
  }
  std::vector<Real> out;
  out.reserve(r * c);
  for (const auto& p : parts) out.insert(out.end(), p.values().begin(), p.values().end());
  return make_result("concat_rows", {r, c}, std::move(out), parts, [](Node& self) {
    std::size_t offset = 0;
    for (const auto& in : self.inputs) {
      const std::size_t n = in->value.size();
      if (in->requires_grad) {
        auto& g = in->ensure_grad();
        for (std::size_t i = 0; i < n; ++i) g[i] += self.grad[offset + i];
      }
      offset += n;
    }
  });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const std::size_t r = parts[0].rows();
  std::size_t c = 0;
  for (const auto& p : parts) {
    if (p.rows() != r) {
      throw ShapeError("concat_cols: row mismatch " + parts[0].shape().str() +
                       " vs " + p.shape().str());
    }
    c += p.cols();
  }
  std::vector<Real> out(r * c);
  std::size_t col0 = 0;
  for (const auto& p : parts) {
    const std::size_t pc = p.cols();
    const auto& pv = p.values();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < pc; ++j) out[i * c + col0 + j] = pv[i * pc + j];
    col0 += pc;
  }
  return make_result("concat_cols", {r, c}, std::move(out), parts, [r, c](Node& self) {
    std::size_t col0 = 0;
    for (const auto& in : self.inputs) {
      const std::size_t pc = in->shape.cols;
      if (in->requires_grad) {
        auto& g = in->ensure_grad();
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < pc; ++j) g[i * pc + j] += self.grad[i * c + col0 + j];
      }
      col0 += pc;
    }
  });
}

Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t end) {
  if (begin > end || end > a.rows()) {
    throw ShapeError("slice_rows: range [" + std::to_string(begin) + "," +
                     std::to_string(end) + ") out of " + a.shape().str());
  }
  const std::size_t c = a.cols();
  std::vector<Real> out(a.values().begin() + begin * c, a.values().begin() + end * c);
  return make_result("slice_rows", {end - begin, c}, std::move(out), {a},
                     [begin, c](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t i = 0; i < self.grad.size(); ++i)
                         g[begin * c + i] += self.grad[i];
                     });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  if (begin > end || end > a.cols()) {
    throw ShapeError("slice_cols: range [" + std::to_string(begin) + "," +
                     std::to_string(end) + ") out of " + a.shape().str());
  }
  const std::size_t r = a.rows(), c = a.cols(), w = end - begin;
  std::vector<Real> out(r * w);
  const auto& av = a.values();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < w; ++j) out[i * w + j] = av[i * c + begin + j];
  return make_result("slice_cols", {r, w}, std::move(out), {a},
                     [r, c, w, begin](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t i = 0; i < r; ++i)
                         for (std::size_t j = 0; j < w; ++j)
                           g[i * c + begin + j] += self.grad[i * w + j];
                     });
}

Tensor gather_cols(const Tensor& table, std::span<const std::size_t> indices) {
  const std::size_t r = table.rows(), c = table.cols(), n = indices.size();
  std::vector<Real> out(r * n);
  const auto& tv = table.values();
  for (std::size_t j = 0; j < n; ++j) {
    if (indices[j] >= c) {
      throw ShapeError("gather_cols: index " + std::to_string(indices[j]) +
                       " out of " + table.shape().str());
    }
    for (std::size_t i = 0; i < r; ++i) out[i * n + j] = tv[i * c + indices[j]];
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return make_result("gather_cols", {r, n}, std::move(out), {table},
                     [r, c, n, idx = std::move(idx)](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t j = 0; j < n; ++j)
                         for (std::size_t i = 0; i < r; ++i)
                           g[i * c + idx[j]] += self.grad[i * n + j];
                     });
}

Tensor scatter_add_rows(const Tensor& src, std::span<const std::size_t> indices,
                        std::size_t out_rows) {
  if (src.cols() != 1 || src.rows() != indices.size()) {
    throw ShapeError("scatter_add_rows: source " + src.shape().str() + " vs " +
                     std::to_string(indices.size()) + " indices");
  }
  std::vector<Real> out(out_rows, Real(0));
  const auto& sv = src.values();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= out_rows) {
      throw ShapeError("scatter_add_rows: index " + std::to_string(indices[i]) +
                       " >= " + std::to_string(out_rows));
    }
    out[indices[i]] += sv[i];
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return make_result("scatter_add_rows", {out_rows, 1}, std::move(out), {src},
                     [idx = std::move(idx)](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t i = 0; i < idx.size(); ++i) g[i] += self.grad[idx[i]];
                     });
}

Tensor pick(const Tensor& a, std::size_t row, std::size_t col) {
  if (row >= a.rows() || col >= a.cols()) {
    throw ShapeError("pick: (" + std::to_string(row) + "," + std::to_string(col) +
                     ") out of " + a.shape().str());
  }
  const std::size_t flat = row * a.cols() + col;
  return make_result("pick", {1, 1}, {a.values()[flat]}, {a}, [flat](Node& self) {
    self.inputs[0]->ensure_grad()[flat] += self.grad[0];
  });
}

Tensor max_over_cols(const Tensor& a) {
  const std::size_t r = a.rows(), c = a.cols();
  if (c == 0) throw ShapeError("max_over_cols: no columns in " + a.shape().str());
  std::vector<Real> out(r);
  std::vector<std::size_t> arg(r);
  const auto& av = a.values();
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < c; ++j)
      if (av[i * c + j] > av[i * c + best]) best = j;
    arg[i] = best;
    out[i] = av[i * c + best];
  }
  return make_result("max_over_cols", {r, 1}, std::move(out), {a},
                     [c, arg = std::move(arg)](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t i = 0; i < arg.size(); ++i) g[i * c + arg[i]] += self.grad[i];
                     });
}

Tensor softmax(const Tensor& a, int axis, const Mask& mask) {
  if (axis != 0 && axis != 1) throw ShapeError("softmax: axis must be 0 or 1");
  if (!mask.empty() && mask.size() != a.size()) {
    throw ShapeError("softmax: mask size " + std::to_string(mask.size()) +
                     " does not match " + a.shape().str());
  }
  const std::size_t r = a.rows(), c = a.cols();
  // A slice is a row (axis 1) or a column (axis 0); stride walks within it.
  const std::size_t slices = axis == 1 ? r : c;
  const std::size_t len = axis == 1 ? c : r;
  auto flat = [=](std::size_t s, std::size_t k) { return axis == 1 ? s * c + k : k * c + s; };

  const auto& av = a.values();
  std::vector<Real> out(a.size(), Real(0));
  for (std::size_t s = 0; s < slices; ++s) {
    Real mx = -std::numeric_limits<Real>::infinity();
    bool any = false;
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t f = flat(s, k);
      if (!mask.empty() && !mask[f]) continue;
      any = true;
      mx = std::max(mx, av[f]);
    }
    if (!any) throw DomainError("softmax: slice " + std::to_string(s) + " is fully masked");
    Real total = 0;
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t f = flat(s, k);
      if (!mask.empty() && !mask[f]) continue;
      out[f] = std::exp(av[f] - mx);
      total += out[f];
    }
    for (std::size_t k = 0; k < len; ++k) out[flat(s, k)] /= total;
  }
  return make_result("softmax", a.shape(), std::move(out), {a},
                     [slices, len, flat](Node& self) {
                       const auto& y = self.value;
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t s = 0; s < slices; ++s) {
                         Real dot = 0;
                         for (std::size_t k = 0; k < len; ++k) {
                           const std::size_t f = flat(s, k);
                           dot += y[f] * self.grad[f];
                         }
                         for (std::size_t k = 0; k < len; ++k) {
                           const std::size_t f = flat(s, k);
                           g[f] += y[f] * (self.grad[f] - dot);
                         }
                       }
                     });
}

Tensor variational_dropout(const Tensor& a, Real rate, bool training, Rng& rng) {
  if (!(rate >= Real(0) && rate < Real(1))) {
    throw DomainError("variational_dropout: rate " + std::to_string(rate) +
                      " outside [0, 1)");
  }
  if (!training || rate == Real(0)) return a;
  const std::size_t r = a.rows(), c = a.cols();
  std::vector<Real> keep(r);
  const Real scale = Real(1) / (Real(1) - rate);
  for (auto& k : keep) k = rng.bernoulli(static_cast<double>(rate)) ? Real(0) : scale;
  std::vector<Real> out(a.size());
  const auto& av = a.values();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = av[i * c + j] * keep[i];
  return make_result("variational_dropout", a.shape(), std::move(out), {a},
                     [c, keep = std::move(keep)](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t i = 0; i < keep.size(); ++i)
                         for (std::size_t j = 0; j < c; ++j)
                           g[i * c + j] += self.grad[i * c + j] * keep[i];
                     });
}

}  // namespace qgen::ad
