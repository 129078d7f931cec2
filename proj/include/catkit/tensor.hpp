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

#ifndef CATKIT_TENSOR_HPP_
#define CATKIT_TENSOR_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "catkit/rng.hpp"

namespace catkit {

using Shape = std::vector<int>;

std::size_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

template <typename T>
struct Node;

// While a guard is alive on this thread, operations record no graph: results
// never require grad and saved activations are released immediately.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool GradEnabled();

// Backward closures read the node's own grad and accumulate into the grads of
// its parents. Only parents that require grad have grad storage.
template <typename T>
using BackwardFn = std::function<void(Node<T>&)>;

template <typename T>
struct Node {
  Shape shape;
  std::vector<T> value;
  std::vector<T> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  BackwardFn<T> backward;

  std::vector<T>& EnsureGrad() {
    if (grad.size() != value.size()) grad.assign(value.size(), T(0));
    return grad;
  }
};

// Handle onto a node of the autodiff graph. Copies share the node. Results of
// operations on tensors that require grad record their parents; everything
// else is a plain value.
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  static Tensor Leaf(Shape shape, std::vector<T> values, bool requires_grad = false);
  static Tensor Zeros(Shape shape, bool requires_grad = false);
  static Tensor Full(Shape shape, T value, bool requires_grad = false);
  static Tensor Scalar(T value, bool requires_grad = false);

  // Extension point for operations defined outside this header. `backward`
  // is kept only when some parent requires grad.
  static Tensor FromOp(Shape shape, std::vector<T> value, std::vector<Tensor> parents,
                       BackwardFn<T> backward);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int rank() const { return static_cast<int>(node_->shape.size()); }
  int dim(int axis) const;
  std::size_t size() const { return node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }

  std::span<const T> data() const { return node_->value; }
  // Direct write access, meant for leaves (parameters, inputs).
  std::span<T> mutable_data() { return node_->value; }
  std::span<const T> grad() const { return node_->grad; }
  bool has_grad() const { return node_->grad.size() == node_->value.size(); }
  void ZeroGrad();
  T item() const;
  T at(std::size_t i) const { return node_->value[i]; }

  Node<T>* node() const { return node_.get(); }

 private:
  explicit Tensor(std::shared_ptr<Node<T>> node) : node_(std::move(node)) {}

  std::shared_ptr<Node<T>> node_;
};

// Reverse-mode sweep from a scalar. Every node reachable through
// requires-grad edges is visited exactly once, in reverse topological order;
// leaf grads accumulate across calls until ZeroGrad.
template <typename T>
void backward(const Tensor<T>& loss);

// -- elementwise and structural ops ----------------------------------------

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> scale(const Tensor<T>& a, T factor);
template <typename T>
Tensor<T> sum(const Tensor<T>& a);
template <typename T>
Tensor<T> mean(const Tensor<T>& a);
template <typename T>
Tensor<T> reshape(const Tensor<T>& a, Shape shape);
// Two-dimensional transpose.
template <typename T>
Tensor<T> transpose(const Tensor<T>& a);
// Scalar view of element `index`.
template <typename T>
Tensor<T> select(const Tensor<T>& a, std::size_t index);

template <typename T>
Tensor<T> relu(const Tensor<T>& x);
// Exact form x * Phi(x), Phi the standard normal CDF.
template <typename T>
Tensor<T> gelu(const Tensor<T>& x);
template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x);
template <typename T>
Tensor<T> log(const Tensor<T>& x);

// -- linear algebra ---------------------------------------------------------

// Two-dimensional product op(a) * op(b).
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b, bool trans_a = false,
                 bool trans_b = false);

// x[..., d_in] * w[d_in, d_out] + b[d_out]. `b` may be undefined.
template <typename T>
Tensor<T> dense(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b);

// Stride-1, zero-padded ("same") 3x3 cross-correlation.
// x[C_in, H, W], k[C_out, C_in, 3, 3], b[C_out] -> [C_out, H, W].
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& k, const Tensor<T>& b);

// 2x2 window, stride 2. Ties route the gradient to the first cell in
// row-major order.
template <typename T>
Tensor<T> maxpool2d(const Tensor<T>& x);

// -- normalization and attention -------------------------------------------

// Along the last axis, shifted by the row maximum.
template <typename T>
Tensor<T> softmax(const Tensor<T>& v);

// Population variance over the last axis.
template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gain, const Tensor<T>& bias,
                     double eps = 1e-5);

// Scaled dot-product attention for q, k, v [n, d] split into `heads` column
// blocks; returns the concatenated per-head outputs [n, d].
template <typename T>
Tensor<T> attention(const Tensor<T>& q, const Tensor<T>& k, const Tensor<T>& v, int heads);

template <typename T>
struct AttentionParams {
  Tensor<T> wq, bq, wk, bk, wv, bv, wo, bo;
};

template <typename T>
Tensor<T> multi_head_attention(const Tensor<T>& x, const AttentionParams<T>& p, int heads);

// Attention-weighted token average: a = softmax(x u), out = a^T x.
// x[n, d], u[d, 1] -> [d].
template <typename T>
Tensor<T> sequence_pool(const Tensor<T>& x, const Tensor<T>& u);

// -- stochastic regularizers ------------------------------------------------

// Stochastic depth on a residual branch: zeroed with probability `rate`,
// otherwise scaled by 1/(1 - rate). Identity when not training.
template <typename T>
Tensor<T> drop_path(const Tensor<T>& x, double rate, bool training, Rng& rng);

// Elementwise inverted dropout. Identity when not training.
template <typename T>
Tensor<T> dropout(const Tensor<T>& x, double rate, bool training, Rng& rng);

// -- verification ------------------------------------------------------------

// Max over coordinates of |analytic - numeric| / max(1e-8, |analytic| +
// |numeric|), numeric from the fourth-order central stencil at offsets
// +-s/2 and +-s (truncation O(s^4)). s starts at h and drops tenfold, at
// most four times, while the second differences at s, s/2 and s/4 fail to
// scale linearly with the step, which happens when a kink lies inside the
// stencil. `x` must
// be a leaf that `f` reads; its values are perturbed in place and restored.
// When max_coords > 0 only an evenly strided subset of coordinates is probed.
double grad_check(const std::function<Tensor<double>(const Tensor<double>&)>& f,
                  Tensor<double>& x, double h = 1e-3, std::size_t max_coords = 0);

}  // namespace catkit

#endif  // CATKIT_TENSOR_HPP_
