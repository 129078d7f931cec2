// Copyright (c) 2026 The catkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catkit/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "catkit/errors.hpp"
#include "catkit/gemm.hpp"

namespace catkit {

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

namespace {

void CheckShape(const Shape& shape) {
  for (int d : shape) {
    if (d <= 0) throw ShapeError("tensor dims must be positive, got " + ShapeToString(shape));
  }
}

template <typename T>
void RequireSameShape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + ShapeToString(a.shape()) + " vs " +
                     ShapeToString(b.shape()));
  }
}

// Grad buffer of parent `i`, or nullptr when that parent needs no gradient.
template <typename T>
T* ParentGrad(Node<T>& self, std::size_t i) {
  Node<T>& p = *self.parents[i];
  return p.requires_grad ? p.EnsureGrad().data() : nullptr;
}

template <typename T>
const T* ParentValue(const Node<T>& self, std::size_t i) {
  return self.parents[i]->value.data();
}

template <typename T>
Tensor<T> Unary(const Tensor<T>& x, T (*f)(T), T (*df)(T, T)) {
  std::vector<T> out(x.size());
  const auto in = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(in[i]);
  return Tensor<T>::FromOp(x.shape(), std::move(out), {x}, [df](Node<T>& self) {
    T* gx = ParentGrad(self, 0);
    if (!gx) return;
    const T* xv = ParentValue(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      gx[i] += self.grad[i] * df(xv[i], self.value[i]);
    }
  });
}

// Vectorizable exp for non-positive arguments (softmax after the max shift):
// range reduction to 2^n * e^r with a degree-6 minimax polynomial, ~1 ulp.
inline float ExpNonPositive(float x) {
  x = x < -87.0f ? -87.0f : x;
  const float n = std::floor(x * 1.44269504088896341f + 0.5f);
  const float r = x - n * 0.693359375f + n * 2.12194440e-4f;
  float p = 1.9875691500e-4f;
  p = p * r + 1.3981999507e-3f;
  p = p * r + 8.3334519073e-3f;
  p = p * r + 4.1665795894e-2f;
  p = p * r + 1.6666665459e-1f;
  p = p * r + 5.0000001201e-1f;
  p = p * r * r + r + 1.0f;
  const std::int32_t bits = (static_cast<std::int32_t>(n) + 127) << 23;
  return p * std::bit_cast<float>(bits);
}

// row[j] = exp(row[j] - shift); returns the sum.
template <typename T>
T ExpShifted(T* row, std::size_t n, T shift) {
  T total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    row[j] = std::exp(row[j] - shift);
    total += row[j];
  }
  return total;
}

template <>
float ExpShifted<float>(float* row, std::size_t n, float shift) {
  float total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    row[j] = ExpNonPositive(row[j] - shift);
    total += row[j];
  }
  return total;
}

// Lane-blocked so the compiler can vectorize the reduction.
template <typename T>
T RowMax(const T* row, std::size_t n) {
  constexpr std::size_t kLanes = 16;
  T m = row[0];
  std::size_t j = 0;
  if (n >= kLanes) {
    T lanes[kLanes];
    for (std::size_t l = 0; l < kLanes; ++l) lanes[l] = row[l];
    for (j = kLanes; j + kLanes <= n; j += kLanes) {
      for (std::size_t l = 0; l < kLanes; ++l) lanes[l] = row[j + l] > lanes[l] ? row[j + l] : lanes[l];
    }
    for (std::size_t l = 0; l < kLanes; ++l) m = lanes[l] > m ? lanes[l] : m;
  }
  for (; j < n; ++j) m = row[j] > m ? row[j] : m;
  return m;
}

template <typename T>
void SoftmaxRows(T* data, std::size_t rows, std::size_t n) {
  for (std::size_t r = 0; r < rows; ++r) {
    T* row = data + r * n;
    const T m = RowMax(row, n);
    const T total = ExpShifted(row, n, m);
    const T inv = T(1) / total;
    for (std::size_t j = 0; j < n; ++j) row[j] *= inv;
  }
}

// dx = y * (dy - <dy, y>) per row; accumulates into dx, or overwrites it when
// `overwrite` is set.
template <typename T>
void SoftmaxRowsBackward(const T* y, const T* dy, T* dx, std::size_t rows, std::size_t n,
                         bool overwrite = false) {
  for (std::size_t r = 0; r < rows; ++r) {
    const T* yr = y + r * n;
    const T* gr = dy + r * n;
    T dot = 0;
    for (std::size_t j = 0; j < n; ++j) dot += gr[j] * yr[j];
    T* xr = dx + r * n;
    if (overwrite) {
      for (std::size_t j = 0; j < n; ++j) xr[j] = yr[j] * (gr[j] - dot);
    } else {
      for (std::size_t j = 0; j < n; ++j) xr[j] += yr[j] * (gr[j] - dot);
    }
  }
}

}  // namespace

// -- Tensor -------------------------------------------------------------------

namespace {
thread_local bool grad_enabled = true;
}  // namespace

bool GradEnabled() { return grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(grad_enabled) { grad_enabled = false; }
NoGradGuard::~NoGradGuard() { grad_enabled = previous_; }

template <typename T>
Tensor<T> Tensor<T>::Leaf(Shape shape, std::vector<T> values, bool requires_grad) {
  CheckShape(shape);
  if (NumElements(shape) != values.size()) {
    throw ShapeError("shape " + ShapeToString(shape) + " holds " +
                     std::to_string(NumElements(shape)) + " values, got " +
                     std::to_string(values.size()));
  }
  auto node = std::make_shared<Node<T>>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

template <typename T>
Tensor<T> Tensor<T>::Zeros(Shape shape, bool requires_grad) {
  return Full(std::move(shape), T(0), requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::Full(Shape shape, T value, bool requires_grad) {
  CheckShape(shape);
  std::vector<T> values(NumElements(shape), value);
  return Leaf(std::move(shape), std::move(values), requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::Scalar(T value, bool requires_grad) {
  return Leaf({1}, {value}, requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::FromOp(Shape shape, std::vector<T> value, std::vector<Tensor> parents,
                            BackwardFn<T> backward) {
  auto node = std::make_shared<Node<T>>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  if (GradEnabled()) {
    for (const Tensor& p : parents) {
      if (p.defined() && p.requires_grad()) node->requires_grad = true;
    }
  }
  if (node->requires_grad) {
    node->parents.reserve(parents.size());
    for (Tensor& p : parents) node->parents.push_back(std::move(p.node_));
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

template <typename T>
int Tensor<T>::dim(int axis) const {
  const int r = rank();
  if (axis < 0) axis += r;
  if (axis < 0 || axis >= r) throw ShapeError("axis out of range");
  return node_->shape[axis];
}

template <typename T>
void Tensor<T>::ZeroGrad() {
  if (!node_->grad.empty()) std::fill(node_->grad.begin(), node_->grad.end(), T(0));
}

template <typename T>
T Tensor<T>::item() const {
  if (size() != 1) throw InvalidArgument("item() on a tensor of shape " + ShapeToString(shape()));
  return node_->value[0];
}

template <typename T>
void backward(const Tensor<T>& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw InvalidArgument("backward needs a scalar loss");
  }
  Node<T>* root = loss.node();
  if (!root->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node<T>*> order;
  std::unordered_set<Node<T>*> visited;
  std::vector<std::pair<Node<T>*, std::size_t>> stack{{root, 0}};
  visited.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node<T>* p = node->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  // Interior grads restart at zero; only leaves accumulate across calls.
  for (Node<T>* node : order) {
    if (node->backward) {
      auto& g = node->EnsureGrad();
      std::fill(g.begin(), g.end(), T(0));
    }
  }
  root->EnsureGrad()[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node<T>* node = *it;
    if (node->backward && !node->grad.empty()) node->backward(*node);
  }
}

// -- elementwise ----------------------------------------------------------------

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  RequireSameShape(a, b, "add");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.at(i) + b.at(i);
  return Tensor<T>::FromOp(a.shape(), std::move(out), {a, b}, [](Node<T>& self) {
    for (std::size_t p = 0; p < 2; ++p) {
      if (T* g = ParentGrad(self, p)) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i];
      }
    }
  });
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  RequireSameShape(a, b, "mul");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.at(i) * b.at(i);
  return Tensor<T>::FromOp(a.shape(), std::move(out), {a, b}, [](Node<T>& self) {
    const T* av = ParentValue(self, 0);
    const T* bv = ParentValue(self, 1);
    if (T* ga = ParentGrad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) ga[i] += self.grad[i] * bv[i];
    }
    if (T* gb = ParentGrad(self, 1)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) gb[i] += self.grad[i] * av[i];
    }
  });
}

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T factor) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.at(i) * factor;
  return Tensor<T>::FromOp(a.shape(), std::move(out), {a}, [factor](Node<T>& self) {
    if (T* g = ParentGrad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i] * factor;
    }
  });
}

template <typename T>
Tensor<T> sum(const Tensor<T>& a) {
  const auto d = a.data();
  const T total = std::accumulate(d.begin(), d.end(), T(0));
  return Tensor<T>::FromOp({1}, {total}, {a}, [](Node<T>& self) {
    if (T* g = ParentGrad(self, 0)) {
      const std::size_t n = self.parents[0]->value.size();
      for (std::size_t i = 0; i < n; ++i) g[i] += self.grad[0];
    }
  });
}

template <typename T>
Tensor<T> mean(const Tensor<T>& a) {
  return scale(sum(a), T(1) / static_cast<T>(a.size()));
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& a, Shape shape) {
  CheckShape(shape);
  if (NumElements(shape) != a.size()) {
    throw ShapeError("cannot reshape " + ShapeToString(a.shape()) + " to " + ShapeToString(shape));
  }
  std::vector<T> out(a.data().begin(), a.data().end());
  return Tensor<T>::FromOp(std::move(shape), std::move(out), {a}, [](Node<T>& self) {
    if (T* g = ParentGrad(self, 0)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) g[i] += self.grad[i];
    }
  });
}

template <typename T>
Tensor<T> transpose(const Tensor<T>& a) {
  if (a.rank() != 2) throw ShapeError("transpose expects a 2-D tensor");
  const int rows = a.dim(0), cols = a.dim(1);
  std::vector<T> out(a.size());
  const auto in = a.data();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out[c * rows + r] = in[r * cols + c];
  }
  return Tensor<T>::FromOp({cols, rows}, std::move(out), {a}, [rows, cols](Node<T>& self) {
    if (T* g = ParentGrad(self, 0)) {
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) g[r * cols + c] += self.grad[c * rows + r];
      }
    }
  });
}

template <typename T>
Tensor<T> select(const Tensor<T>& a, std::size_t index) {
  if (index >= a.size()) throw ShapeError("select index out of range");
  return Tensor<T>::FromOp({1}, {a.at(index)}, {a}, [index](Node<T>& self) {
    if (T* g = ParentGrad(self, 0)) g[index] += self.grad[0];
  });
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  return Unary<T>(
      x, [](T v) { return v > T(0) ? v : T(0); },
      [](T v, T) { return v > T(0) ? T(1) : T(0); });
}

template <typename T>
Tensor<T> gelu(const Tensor<T>& x) {
  return Unary<T>(
      x,
      [](T v) { return T(0.5) * v * (T(1) + std::erf(v / std::numbers::sqrt2_v<T>)); },
      [](T v, T) {
        const T cdf = T(0.5) * (T(1) + std::erf(v / std::numbers::sqrt2_v<T>));
        const T pdf = std::exp(T(-0.5) * v * v) * (std::numbers::inv_sqrtpi_v<T> /
                                                   std::numbers::sqrt2_v<T>);
        return cdf + v * pdf;
      });
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  return Unary<T>(
      x,
      [](T v) {
        if (v >= T(0)) return T(1) / (T(1) + std::exp(-v));
        const T e = std::exp(v);
        return e / (T(1) + e);
      },
      [](T, T y) { return y * (T(1) - y); });
}

template <typename T>
Tensor<T> log(const Tensor<T>& x) {
  return Unary<T>(
      x, [](T v) { return std::log(v); }, [](T v, T) { return T(1) / v; });
}

// -- linear algebra ---------------------------------------------------------------

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b, bool trans_a, bool trans_b) {
  if (a.rank() != 2 || b.rank() != 2) throw ShapeError("matmul expects 2-D tensors");
  const int m = trans_a ? a.dim(1) : a.dim(0);
  const int k = trans_a ? a.dim(0) : a.dim(1);
  const int kb = trans_b ? b.dim(1) : b.dim(0);
  const int n = trans_b ? b.dim(0) : b.dim(1);
  if (k != kb) {
    throw ShapeError("matmul inner dims differ: " + ShapeToString(a.shape()) + " x " +
                     ShapeToString(b.shape()));
  }
  const int lda = a.dim(1), ldb = b.dim(1);
  std::vector<T> out(static_cast<std::size_t>(m) * n);
  gemm<T>(trans_a, trans_b, m, n, k, T(1), a.data().data(), lda, b.data().data(), ldb, T(0),
          out.data(), n);
  return Tensor<T>::FromOp(
      {m, n}, std::move(out), {a, b},
      [=](Node<T>& self) {
        const T* av = ParentValue(self, 0);
        const T* bv = ParentValue(self, 1);
        const T* dc = self.grad.data();
        if (T* da = ParentGrad(self, 0)) {
          if (!trans_a) {
            gemm<T>(false, !trans_b, m, k, n, T(1), dc, n, bv, ldb, T(1), da, lda);
          } else {
            gemm<T>(trans_b, true, k, m, n, T(1), bv, ldb, dc, n, T(1), da, lda);
          }
        }
        if (T* db = ParentGrad(self, 1)) {
          if (!trans_b) {
            gemm<T>(!trans_a, false, k, n, m, T(1), av, lda, dc, n, T(1), db, ldb);
          } else {
            gemm<T>(true, trans_a, n, k, m, T(1), dc, n, av, lda, T(1), db, ldb);
          }
        }
      });
}

template <typename T>
Tensor<T> dense(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  if (w.rank() != 2) throw ShapeError("dense weight must be 2-D");
  const int d_in = w.dim(0), d_out = w.dim(1);
  if (x.dim(-1) != d_in) {
    throw ShapeError("dense: input " + ShapeToString(x.shape()) + " vs weight " +
                     ShapeToString(w.shape()));
  }
  if (b.defined() && (b.size() != static_cast<std::size_t>(d_out))) {
    throw ShapeError("dense: bias " + ShapeToString(b.shape()) + " vs weight " +
                     ShapeToString(w.shape()));
  }
  const int rows = static_cast<int>(x.size() / d_in);
  std::vector<T> out(static_cast<std::size_t>(rows) * d_out, T(0));
  if (b.defined()) {
    for (int r = 0; r < rows; ++r) std::copy(b.data().begin(), b.data().end(), out.begin() + r * d_out);
  }
  gemm<T>(false, false, rows, d_out, d_in, T(1), x.data().data(), d_in, w.data().data(), d_out,
          T(1), out.data(), d_out);
  Shape shape = x.shape();
  shape.back() = d_out;
  std::vector<Tensor<T>> parents{x, w};
  if (b.defined()) parents.push_back(b);
  const bool has_bias = b.defined();
  return Tensor<T>::FromOp(std::move(shape), std::move(out), std::move(parents),
                           [=](Node<T>& self) {
                             const T* dy = self.grad.data();
                             if (T* dx = ParentGrad(self, 0)) {
                               gemm<T>(false, true, rows, d_in, d_out, T(1), dy, d_out,
                                       ParentValue(self, 1), d_out, T(1), dx, d_in);
                             }
                             if (T* dw = ParentGrad(self, 1)) {
                               gemm<T>(true, false, d_in, d_out, rows, T(1),
                                       ParentValue(self, 0), d_in, dy, d_out, T(1), dw, d_out);
                             }
                             if (has_bias) {
                               if (T* db = ParentGrad(self, 2)) {
                                 for (int r = 0; r < rows; ++r) {
                                   for (int j = 0; j < d_out; ++j) db[j] += dy[r * d_out + j];
                                 }
                               }
                             }
                           });
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& k, const Tensor<T>& b) {
  if (x.rank() != 3) throw ShapeError("conv2d input must be [C, H, W]");
  if (k.rank() != 4 || k.dim(2) != 3 || k.dim(3) != 3) {
    throw ShapeError("conv2d kernel must be [C_out, C_in, 3, 3]");
  }
  const int c_in = x.dim(0), h = x.dim(1), w = x.dim(2);
  const int c_out = k.dim(0);
  if (k.dim(1) != c_in) {
    throw ShapeError("conv2d: input has " + std::to_string(c_in) + " channels, kernel expects " +
                     std::to_string(k.dim(1)));
  }
  if (b.defined() && b.size() != static_cast<std::size_t>(c_out)) {
    throw ShapeError("conv2d: bias size must equal output channels");
  }
  const int hw = h * w;
  const int patch = c_in * 9;

  // im2col: cols[(c*9 + ky*3 + kx), y*w + x] = x[c, y+ky-1, x+kx-1] (0 outside).
  auto cols = std::make_shared<std::vector<T>>(static_cast<std::size_t>(patch) * hw, T(0));
  const T* xv = x.data().data();
  for (int c = 0; c < c_in; ++c) {
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        T* dst = cols->data() + static_cast<std::size_t>(c * 9 + ky * 3 + kx) * hw;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          const T* src = xv + (static_cast<std::size_t>(c) * h + sy) * w;
          const int x0 = std::max(0, 1 - kx), x1 = std::min(w, w + 1 - kx);
          for (int xx = x0; xx < x1; ++xx) dst[y * w + xx] = src[xx + kx - 1];
        }
      }
    }
  }

  std::vector<T> out(static_cast<std::size_t>(c_out) * hw, T(0));
  if (b.defined()) {
    for (int o = 0; o < c_out; ++o) std::fill_n(out.begin() + o * hw, hw, b.at(o));
  }
  gemm<T>(false, false, c_out, hw, patch, T(1), k.data().data(), patch, cols->data(), hw, T(1),
          out.data(), hw);

  std::vector<Tensor<T>> parents{x, k};
  if (b.defined()) parents.push_back(b);
  const bool has_bias = b.defined();
  return Tensor<T>::FromOp(
      {c_out, h, w}, std::move(out), std::move(parents), [=](Node<T>& self) {
        const T* dy = self.grad.data();
        if (T* dk = ParentGrad(self, 1)) {
          gemm<T>(false, true, c_out, patch, hw, T(1), dy, hw, cols->data(), hw, T(1), dk, patch);
        }
        if (has_bias) {
          if (T* db = ParentGrad(self, 2)) {
            for (int o = 0; o < c_out; ++o) {
              const T* row = dy + static_cast<std::size_t>(o) * hw;
              db[o] += std::accumulate(row, row + hw, T(0));
            }
          }
        }
        if (T* dx = ParentGrad(self, 0)) {
          std::vector<T> dcols(static_cast<std::size_t>(patch) * hw, T(0));
          gemm<T>(true, false, patch, hw, c_out, T(1), ParentValue(self, 1), patch, dy, hw, T(0),
                  dcols.data(), hw);
          for (int c = 0; c < c_in; ++c) {
            for (int ky = 0; ky < 3; ++ky) {
              for (int kx = 0; kx < 3; ++kx) {
                const T* src = dcols.data() + static_cast<std::size_t>(c * 9 + ky * 3 + kx) * hw;
                for (int y = 0; y < h; ++y) {
                  const int sy = y + ky - 1;
                  if (sy < 0 || sy >= h) continue;
                  T* dst = dx + (static_cast<std::size_t>(c) * h + sy) * w;
                  const int x0 = std::max(0, 1 - kx), x1 = std::min(w, w + 1 - kx);
                  for (int xx = x0; xx < x1; ++xx) dst[xx + kx - 1] += src[y * w + xx];
                }
              }
            }
          }
        }
      });
}

template <typename T>
Tensor<T> maxpool2d(const Tensor<T>& x) {
  if (x.rank() != 3) throw ShapeError("maxpool2d input must be [C, H, W]");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  if (h % 2 || w % 2) {
    throw ShapeError("maxpool2d needs even spatial dims, got " + ShapeToString(x.shape()));
  }
  const int oh = h / 2, ow = w / 2;
  std::vector<T> out(static_cast<std::size_t>(c) * oh * ow);
  auto argmax = std::make_shared<std::vector<std::size_t>>(out.size());
  const T* xv = x.data().data();
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < oh; ++y) {
      for (int xx = 0; xx < ow; ++xx) {
        const std::size_t base = (static_cast<std::size_t>(ch) * h + 2 * y) * w + 2 * xx;
        const std::size_t cand[4] = {base, base + 1, base + w, base + w + 1};
        std::size_t best = cand[0];
        for (int i = 1; i < 4; ++i) {
          if (xv[cand[i]] > xv[best]) best = cand[i];
        }
        const std::size_t o = (static_cast<std::size_t>(ch) * oh + y) * ow + xx;
        out[o] = xv[best];
        (*argmax)[o] = best;
      }
    }
  }
  return Tensor<T>::FromOp({c, oh, ow}, std::move(out), {x}, [argmax](Node<T>& self) {
    if (T* g = ParentGrad(self, 0)) {
      for (std::size_t o = 0; o < self.grad.size(); ++o) g[(*argmax)[o]] += self.grad[o];
    }
  });
}

// -- normalization and attention ------------------------------------------------

template <typename T>
Tensor<T> softmax(const Tensor<T>& v) {
  const std::size_t n = static_cast<std::size_t>(v.dim(-1));
  const std::size_t rows = v.size() / n;
  std::vector<T> out(v.data().begin(), v.data().end());
  SoftmaxRows(out.data(), rows, n);
  return Tensor<T>::FromOp(v.shape(), std::move(out), {v}, [rows, n](Node<T>& self) {
    if (T* g = ParentGrad(self, 0)) {
      SoftmaxRowsBackward(self.value.data(), self.grad.data(), g, rows, n);
    }
  });
}

template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gain, const Tensor<T>& bias,
                     double eps) {
  const int d = x.dim(-1);
  if (gain.size() != static_cast<std::size_t>(d) || bias.size() != static_cast<std::size_t>(d)) {
    throw ShapeError("layer_norm: gain/bias must match the last axis");
  }
  const std::size_t rows = x.size() / d;
  auto xhat = std::make_shared<std::vector<T>>(x.size());
  auto rstd = std::make_shared<std::vector<T>>(rows);
  std::vector<T> out(x.size());
  const T* xv = x.data().data();
  const T* gv = gain.data().data();
  const T* bv = bias.data().data();
  for (std::size_t r = 0; r < rows; ++r) {
    const T* row = xv + r * d;
    T mu = 0;
    for (int j = 0; j < d; ++j) mu += row[j];
    mu /= static_cast<T>(d);
    T var = 0;
    for (int j = 0; j < d; ++j) var += (row[j] - mu) * (row[j] - mu);
    var /= static_cast<T>(d);
    const T rs = T(1) / std::sqrt(var + static_cast<T>(eps));
    (*rstd)[r] = rs;
    for (int j = 0; j < d; ++j) {
      const T xh = (row[j] - mu) * rs;
      (*xhat)[r * d + j] = xh;
      out[r * d + j] = xh * gv[j] + bv[j];
    }
  }
  return Tensor<T>::FromOp(
      x.shape(), std::move(out), {x, gain, bias}, [=](Node<T>& self) {
        const T* dy = self.grad.data();
        const T* gv = ParentValue(self, 1);
        T* dx = ParentGrad(self, 0);
        T* dg = ParentGrad(self, 1);
        T* db = ParentGrad(self, 2);
        std::vector<T> g(d);
        for (std::size_t r = 0; r < rows; ++r) {
          const T* xh = xhat->data() + r * d;
          const T* dyr = dy + r * d;
          if (dg || db) {
            for (int j = 0; j < d; ++j) {
              if (dg) dg[j] += dyr[j] * xh[j];
              if (db) db[j] += dyr[j];
            }
          }
          if (!dx) continue;
          T sum_g = 0, sum_gx = 0;
          for (int j = 0; j < d; ++j) {
            g[j] = dyr[j] * gv[j];
            sum_g += g[j];
            sum_gx += g[j] * xh[j];
          }
          const T inv_d = T(1) / static_cast<T>(d);
          const T rs = (*rstd)[r];
          for (int j = 0; j < d; ++j) {
            dx[r * d + j] += rs * (g[j] - inv_d * sum_g - xh[j] * inv_d * sum_gx);
          }
        }
      });
}

template <typename T>
Tensor<T> attention(const Tensor<T>& q, const Tensor<T>& k, const Tensor<T>& v, int heads) {
  if (q.rank() != 2) throw ShapeError("attention expects [n, d] inputs");
  RequireSameShape(q, k, "attention");
  RequireSameShape(q, v, "attention");
  const int n = q.dim(0), d = q.dim(1);
  if (heads < 1 || d % heads != 0) {
    throw ConfigError("embedding dim " + std::to_string(d) + " not divisible by " +
                      std::to_string(heads) + " heads");
  }
  const int dh = d / heads;
  const T scale_factor = T(1) / std::sqrt(static_cast<T>(dh));
  const std::size_t nn = static_cast<std::size_t>(n) * n;

  auto probs = std::make_shared<std::vector<T>>(nn * heads);
  std::vector<T> out(static_cast<std::size_t>(n) * d);
  for (int hd = 0; hd < heads; ++hd) {
    T* p = probs->data() + hd * nn;
    gemm<T>(false, true, n, n, dh, scale_factor, q.data().data() + hd * dh, d,
            k.data().data() + hd * dh, d, T(0), p, n);
    SoftmaxRows(p, n, n);
    gemm<T>(false, false, n, dh, n, T(1), p, n, v.data().data() + hd * dh, d, T(0),
            out.data() + hd * dh, d);
  }
  return Tensor<T>::FromOp(
      {n, d}, std::move(out), {q, k, v}, [=](Node<T>& self) {
        const T* qv = ParentValue(self, 0);
        const T* kv = ParentValue(self, 1);
        const T* vv = ParentValue(self, 2);
        T* dq = ParentGrad(self, 0);
        T* dk = ParentGrad(self, 1);
        T* dv = ParentGrad(self, 2);
        std::vector<T> dp, ds;
        if (dq || dk) {
          dp.resize(nn);
          ds.resize(nn);
        }
        for (int hd = 0; hd < heads; ++hd) {
          const T* p = probs->data() + hd * nn;
          const T* dout = self.grad.data() + hd * dh;
          if (dv) gemm<T>(true, false, n, dh, n, T(1), p, n, dout, d, T(1), dv + hd * dh, d);
          if (!dq && !dk) continue;
          gemm<T>(false, true, n, n, dh, T(1), dout, d, vv + hd * dh, d, T(0), dp.data(), n);
          SoftmaxRowsBackward(p, dp.data(), ds.data(), n, n, /*overwrite=*/true);
          if (dq) {
            gemm<T>(false, false, n, dh, n, scale_factor, ds.data(), n, kv + hd * dh, d, T(1),
                    dq + hd * dh, d);
          }
          if (dk) {
            gemm<T>(true, false, n, dh, n, scale_factor, ds.data(), n, qv + hd * dh, d, T(1),
                    dk + hd * dh, d);
          }
        }
      });
}

template <typename T>
Tensor<T> multi_head_attention(const Tensor<T>& x, const AttentionParams<T>& p, int heads) {
  const Tensor<T> q = dense(x, p.wq, p.bq);
  const Tensor<T> k = dense(x, p.wk, p.bk);
  const Tensor<T> v = dense(x, p.wv, p.bv);
  return dense(attention(q, k, v, heads), p.wo, p.bo);
}

template <typename T>
Tensor<T> sequence_pool(const Tensor<T>& x, const Tensor<T>& u) {
  if (x.rank() != 2) throw ShapeError("sequence_pool expects tokens [n, d]");
  const int n = x.dim(0), d = x.dim(1);
  if (u.size() != static_cast<std::size_t>(d)) throw ShapeError("sequence_pool: u must be [d, 1]");
  const Tensor<T> scores = matmul(x, reshape(u, {d, 1}));
  const Tensor<T> weights = softmax(reshape(scores, {1, n}));
  return reshape(matmul(weights, x), {d});
}

// -- stochastic regularizers ------------------------------------------------------

namespace {

void CheckRate(double rate, const char* what) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError(std::string(what) + " rate must lie in [0, 1), got " + std::to_string(rate));
  }
}

}  // namespace

template <typename T>
Tensor<T> drop_path(const Tensor<T>& x, double rate, bool training, Rng& rng) {
  CheckRate(rate, "drop_path");
  if (!training || rate == 0.0) return x;
  const bool keep = !rng.Bernoulli(rate);
  return scale(x, keep ? static_cast<T>(1.0 / (1.0 - rate)) : T(0));
}

template <typename T>
Tensor<T> dropout(const Tensor<T>& x, double rate, bool training, Rng& rng) {
  CheckRate(rate, "dropout");
  if (!training || rate == 0.0) return x;
  const T kept = static_cast<T>(1.0 / (1.0 - rate));
  std::vector<T> mask(x.size());
  for (T& m : mask) m = rng.Bernoulli(rate) ? T(0) : kept;
  return mul(x, Tensor<T>::Leaf(x.shape(), std::move(mask)));
}

// -- verification ---------------------------------------------------------------

double grad_check(const std::function<Tensor<double>(const Tensor<double>&)>& f,
                  Tensor<double>& x, double h, std::size_t max_coords) {
  constexpr int kMaxShrinks = 4;
  x.node()->requires_grad = true;
  x.ZeroGrad();
  const Tensor<double> y = f(x);
  if (y.size() != 1) throw InvalidArgument("grad_check needs a scalar-valued function");
  backward(y);
  std::vector<double> analytic(x.size(), 0.0);
  if (x.has_grad()) std::copy(x.grad().begin(), x.grad().end(), analytic.begin());

  const std::size_t stride =
      (max_coords == 0 || max_coords >= x.size()) ? 1 : (x.size() + max_coords - 1) / max_coords;
  auto values = x.mutable_data();
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); i += stride) {
    const double saved = values[i];
    auto at = [&](double offset) {
      values[i] = saved + offset;
      return f(x).item();
    };
    // Second differences A(s) = (f(x+s) - 2 f(x) + f(x-s)) / s halve with
    // the step when f is smooth over the stencil. A ReLU or max-pool kink
    // inside it breaks A(s) = 2 A(s/2) or A(s/2) = 2 A(s/4), and the step
    // shrinks until the kink falls outside.
    const double centre = at(0.0);
    double step = h, numeric = 0.0;
    for (int shrink = 0; shrink <= kMaxShrinks; ++shrink, step *= 0.1) {
      double f_plus[3], f_minus[3], second[3];
      for (int j = 0; j < 3; ++j) {
        const double s = step / static_cast<double>(1 << j);
        f_plus[j] = at(s);
        f_minus[j] = at(-s);
        second[j] = (f_plus[j] - 2.0 * centre + f_minus[j]) / s;
      }
      numeric = (8.0 * (f_plus[1] - f_minus[1]) - (f_plus[0] - f_minus[0])) / (6.0 * step);
      const double slack = 1e-6 * std::abs(numeric) +
                           256.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(centre)) / step;
      if (std::abs(second[0] - 2.0 * second[1]) <= slack &&
          std::abs(second[1] - 2.0 * second[2]) <= slack) {
        break;
      }
    }
    values[i] = saved;
    const double err = std::abs(analytic[i] - numeric) /
                       std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, err);
  }
  return worst;
}

#define CATKIT_INSTANTIATE(T)                                                                   \
  template class Tensor<T>;                                                                     \
  template void backward<T>(const Tensor<T>&);                                                  \
  template Tensor<T> add<T>(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> mul<T>(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> scale<T>(const Tensor<T>&, T);                                             \
  template Tensor<T> sum<T>(const Tensor<T>&);                                                  \
  template Tensor<T> mean<T>(const Tensor<T>&);                                                 \
  template Tensor<T> reshape<T>(const Tensor<T>&, Shape);                                       \
  template Tensor<T> transpose<T>(const Tensor<T>&);                                            \
  template Tensor<T> select<T>(const Tensor<T>&, std::size_t);                                  \
  template Tensor<T> relu<T>(const Tensor<T>&);                                                 \
  template Tensor<T> gelu<T>(const Tensor<T>&);                                                 \
  template Tensor<T> sigmoid<T>(const Tensor<T>&);                                              \
  template Tensor<T> log<T>(const Tensor<T>&);                                                  \
  template Tensor<T> matmul<T>(const Tensor<T>&, const Tensor<T>&, bool, bool);                 \
  template Tensor<T> dense<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);            \
  template Tensor<T> conv2d<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);           \
  template Tensor<T> maxpool2d<T>(const Tensor<T>&);                                            \
  template Tensor<T> softmax<T>(const Tensor<T>&);                                              \
  template Tensor<T> layer_norm<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,        \
                                   double);                                                     \
  template Tensor<T> attention<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int);   \
  template Tensor<T> multi_head_attention<T>(const Tensor<T>&, const AttentionParams<T>&, int); \
  template Tensor<T> sequence_pool<T>(const Tensor<T>&, const Tensor<T>&);                      \
  template Tensor<T> drop_path<T>(const Tensor<T>&, double, bool, Rng&);                        \
  template Tensor<T> dropout<T>(const Tensor<T>&, double, bool, Rng&);

CATKIT_INSTANTIATE(float)
CATKIT_INSTANTIATE(double)

#undef CATKIT_INSTANTIATE

}  // namespace catkit
