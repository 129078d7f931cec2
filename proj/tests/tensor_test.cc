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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "catkit/errors.hpp"
#include "catkit/losses.hpp"
#include "catkit/tensor.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace catkit;
using TD = Tensor<double>;

namespace {

TD Rand(Shape shape, Rng& rng, double scale = 1.0, bool grad = false) {
  return TD::Leaf(shape, testing::RandomVector(NumElements(shape), rng, scale), grad);
}

// Scalar probe: sum(op(x) * r) for a fixed random r, so every output
// coordinate contributes a distinct weight.
double CheckOp(const std::function<TD(const TD&)>& op, TD x, std::uint64_t seed = 1) {
  Rng rng(seed);
  const TD probe_shape = op(x);
  const TD r = Rand(probe_shape.shape(), rng);
  return grad_check([&](const TD& v) { return sum(mul(op(v), r)); }, x);
}

constexpr double kTol = 1e-6;

}  // namespace

TEST_CASE("leaf construction and shapes") {
  const TD t = TD::Leaf({2, 3}, {1, 2, 3, 4, 5, 6});
  CHECK(t.size() == 6);
  CHECK(t.dim(-1) == 3);
  CHECK(NumElements({2, 3, 4}) == 24);
  CHECK_THROWS_AS(TD::Leaf({2, 2}, {1, 2, 3}), ShapeError);
  CHECK_THROWS_AS(add(TD::Zeros({2}), TD::Zeros({3})), ShapeError);
}

TEST_CASE("backward of a quadratic is 2x") {
  Rng rng(4);
  TD x = Rand({7}, rng, 1.0, true);
  backward(sum(mul(x, x)));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x.grad()[i] == doctest::Approx(2.0 * x.at(i)));
  CHECK_THROWS_AS(backward(mul(x, x)), InvalidArgument);
}

TEST_CASE("identity dense chain passes the upstream grad") {
  std::vector<double> eye(9, 0.0);
  for (int i = 0; i < 3; ++i) eye[i * 4] = 1.0;
  TD x = TD::Leaf({3}, {1, -2, 3}, true);
  const TD w = TD::Leaf({3, 3}, eye);
  const TD r = TD::Leaf({3}, {0.5, 2.0, -1.0});
  backward(sum(mul(dense(dense(x, w, TD()), w, TD()), r)));
  CHECK(std::vector<double>(x.grad().begin(), x.grad().end()) == std::vector<double>{0.5, 2.0, -1.0});
}

TEST_CASE("shared subexpressions accumulate once per use") {
  TD x = TD::Leaf({1}, {3.0}, true);
  const TD y = mul(x, x);
  backward(sum(add(y, y)));  // 2x^2 -> 4x
  CHECK(x.grad()[0] == doctest::Approx(12.0));
  x.ZeroGrad();
  backward(sum(mul(y, y)));  // x^4 -> 4x^3
  CHECK(x.grad()[0] == doctest::Approx(108.0));
}

TEST_CASE("dense forward examples") {
  const TD x = TD::Leaf({2}, {1, 2});
  const TD w = TD::Leaf({2, 1}, {1, 1});
  CHECK(dense(x, w, TD::Leaf({1}, {0})).at(0) == 3.0);
  const TD zero = TD::Zeros({4, 2});
  const TD b = TD::Leaf({3}, {1, 2, 3});
  const TD out = dense(zero, TD::Full({2, 3}, 0.7), b);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 3; ++c) CHECK(out.at(r * 3 + c) == b.at(c));
  }
  CHECK_THROWS_AS(dense(TD::Zeros({3}), TD::Zeros({2, 2}), TD()), ShapeError);
}

TEST_CASE("conv2d forward examples") {
  Rng rng(6);
  const TD x = Rand({2, 5, 4}, rng);
  std::vector<double> k(3 * 2 * 9, 0.0);
  // Output channel o reads input channel o % 2 through its centre tap only.
  for (int o = 0; o < 3; ++o) k[(o * 2 + o % 2) * 9 + 4] = 0.5 + o;
  const TD out = conv2d(x, TD::Leaf({3, 2, 3, 3}, k), TD::Zeros({3}));
  for (int o = 0; o < 3; ++o) {
    for (int i = 0; i < 20; ++i) CHECK(out.at(o * 20 + i) == doctest::Approx((0.5 + o) * x.at((o % 2) * 20 + i)));
  }
  const TD ones = conv2d(TD::Full({1, 3, 3}, 1.0), TD::Full({1, 1, 3, 3}, 1.0), TD::Zeros({1}));
  CHECK(ones.at(4) == 9.0);
  CHECK(ones.at(0) == 4.0);
  CHECK(ones.at(8) == 4.0);
  CHECK(ones.at(1) == 6.0);
  const TD zero = conv2d(x, TD::Zeros({3, 2, 3, 3}), TD::Zeros({3}));
  for (double v : zero.data()) CHECK(v == 0.0);
  CHECK_THROWS_AS(conv2d(x, TD::Zeros({3, 1, 3, 3}), TD::Zeros({3})), ShapeError);
}

TEST_CASE("maxpool forward and routing") {
  CHECK(maxpool2d(TD::Leaf({1, 2, 2}, {1, 2, 3, 4})).at(0) == 4.0);
  std::vector<double> ramp(16);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  const TD p = maxpool2d(TD::Leaf({1, 4, 4}, ramp));
  CHECK(std::vector<double>(p.data().begin(), p.data().end()) == std::vector<double>{5, 7, 13, 15});
  const TD c = maxpool2d(TD::Full({2, 4, 6}, 1.5));
  for (double v : c.data()) CHECK(v == 1.5);
  CHECK_THROWS_AS(maxpool2d(TD::Zeros({1, 3, 4})), ShapeError);

  // Ties route to the first cell in row-major order; every output grad
  // lands on exactly one input.
  TD x = TD::Full({1, 4, 4}, 2.0, true);
  backward(sum(maxpool2d(x)));
  std::vector<double> g(x.grad().begin(), x.grad().end());
  CHECK(std::accumulate(g.begin(), g.end(), 0.0) == 4.0);
  CHECK(g[0] == 1.0);
  CHECK(g[2] == 1.0);
  CHECK(g[8] == 1.0);
  CHECK(g[10] == 1.0);
  Rng rng(8);
  TD y = Rand({3, 6, 8}, rng, 1.0, true);
  backward(sum(maxpool2d(y)));
  int nonzero = 0;
  for (double v : y.grad()) nonzero += v != 0.0;
  CHECK(nonzero == 3 * 3 * 4);
}

TEST_CASE("activation values") {
  const TD r = relu(TD::Leaf({2}, {-1, 2}));
  CHECK(r.at(0) == 0.0);
  CHECK(r.at(1) == 2.0);
  CHECK(gelu(TD::Scalar(0.0)).item() == 0.0);
  CHECK(gelu(TD::Scalar(1.0)).item() == doctest::Approx(0.5 * (1.0 + std::erf(1.0 / std::sqrt(2.0)))).epsilon(1e-14));
  CHECK(gelu(TD::Scalar(1.0)).item() == doctest::Approx(0.841345).epsilon(1e-6));
  CHECK(sigmoid(TD::Scalar(0.0)).item() == 0.5);
}

TEST_CASE("softmax values and invariants") {
  const TD a = softmax(TD::Leaf({2}, {0, 0}));
  CHECK(a.at(0) == doctest::Approx(0.5));
  const TD b = softmax(TD::Leaf({2}, {std::log(2.0), 0}));
  CHECK(b.at(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(b.at(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 1 + static_cast<int>(rng.Below(5)), n = 1 + static_cast<int>(rng.Below(40));
    const TD v = Rand({rows, n}, rng, 10.0);
    const TD s = softmax(v);
    std::vector<double> shifted(v.data().begin(), v.data().end());
    const double c = 100.0 * rng.Normal();
    for (double& e : shifted) e += c;
    const TD s2 = softmax(TD::Leaf({rows, n}, shifted));
    for (int r = 0; r < rows; ++r) {
      double total = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p = s.at(r * n + j);
        CHECK(p > 0.0);
        total += p;
        CHECK(s2.at(r * n + j) == doctest::Approx(p).epsilon(1e-9));
      }
      CHECK(std::abs(total - 1.0) < 1e-6);
    }
  }
  // Float path, including very negative shifted logits.
  const Tensor<float> f = softmax(Tensor<float>::Leaf({1, 4}, {0.0f, -50.0f, -100.0f, 3.0f}));
  float total = 0.0f;
  for (float v : f.data()) {
    CHECK(v >= 0.0f);
    total += v;
  }
  CHECK(std::abs(total - 1.0f) < 1e-6f);
}

TEST_CASE("float softmax agrees with double") {
  Rng rng(12);
  for (int n : {1, 5, 16, 17, 33, 1024}) {
    const auto v = testing::RandomVector(3 * static_cast<std::size_t>(n), rng, 8.0);
    std::vector<float> vf(v.begin(), v.end());
    const TD sd = softmax(TD::Leaf({3, n}, v));
    const Tensor<float> sf = softmax(Tensor<float>::Leaf({3, n}, vf));
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(sf.at(i) - sd.at(i)) < 1e-6);
  }
}

TEST_CASE("layer norm values") {
  const TD c = layer_norm(TD::Full({2, 4}, 3.0), TD::Full({4}, 1.0), TD::Zeros({4}));
  for (double v : c.data()) CHECK(std::abs(v) < 1e-12);
  const TD pm = layer_norm(TD::Leaf({2}, {1, -1}), TD::Full({2}, 1.0), TD::Zeros({2}));
  CHECK(pm.at(0) == doctest::Approx(1.0 / std::sqrt(1.0 + 1e-5)));
  CHECK(pm.at(1) == doctest::Approx(-1.0 / std::sqrt(1.0 + 1e-5)));
  Rng rng(3);
  const TD b = Rand({5}, rng);
  const TD out = layer_norm(Rand({3, 5}, rng), TD::Zeros({5}), b);
  for (int r = 0; r < 3; ++r) {
    for (int j = 0; j < 5; ++j) CHECK(out.at(r * 5 + j) == b.at(j));
  }
}

TEST_CASE("attention structure") {
  Rng rng(21);
  const int d = 4;
  AttentionParams<double> p{Rand({d, d}, rng), Rand({d}, rng), Rand({d, d}, rng), Rand({d}, rng),
                            Rand({d, d}, rng), Rand({d}, rng), Rand({d, d}, rng), Rand({d}, rng)};
  // Singleton: out = W_o (W_v x + b_v) + b_o.
  const TD x1 = Rand({1, d}, rng);
  const TD single = multi_head_attention(x1, p, 2);
  const TD expect = dense(dense(x1, p.wv, p.bv), p.wo, p.bo);
  for (int j = 0; j < d; ++j) CHECK(single.at(j) == doctest::Approx(expect.at(j)).epsilon(1e-12));

  // Identical tokens give identical rows.
  std::vector<double> twin(2 * d);
  for (int j = 0; j < d; ++j) twin[j] = twin[d + j] = rng.Normal();
  const TD t = multi_head_attention(TD::Leaf({2, d}, twin), p, 2);
  for (int j = 0; j < d; ++j) CHECK(t.at(j) == doctest::Approx(t.at(d + j)).epsilon(1e-12));

  // Permutation equivariance.
  const int n = 6;
  const TD x = Rand({n, d}, rng);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> xp(n * d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) xp[i * d + j] = x.at(perm[i] * d + j);
  }
  const TD y = multi_head_attention(x, p, 2);
  const TD yp = multi_head_attention(TD::Leaf({n, d}, xp), p, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) CHECK(yp.at(i * d + j) == doctest::Approx(y.at(perm[i] * d + j)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(multi_head_attention(x, p, 3), ConfigError);
}

TEST_CASE("sequence pool values") {
  const TD one = TD::Leaf({1, 3}, {1, 2, 3});
  const TD p1 = sequence_pool(one, TD::Leaf({3, 1}, {0.3, -1, 2}));
  for (int j = 0; j < 3; ++j) CHECK(p1.at(j) == doctest::Approx(one.at(j)));
  Rng rng(2);
  const TD x = Rand({5, 3}, rng);
  const TD mean_pool = sequence_pool(x, TD::Zeros({3, 1}));
  for (int j = 0; j < 3; ++j) {
    double m = 0.0;
    for (int i = 0; i < 5; ++i) m += x.at(i * 3 + j) / 5.0;
    CHECK(mean_pool.at(j) == doctest::Approx(m));
  }
  const TD p = sequence_pool(TD::Leaf({2, 2}, {1, 0, 0, 1}), TD::Leaf({2, 1}, {std::log(2.0), 0}));
  CHECK(p.shape() == Shape{2});
  CHECK(p.at(0) == doctest::Approx(2.0 / 3.0));
  CHECK(p.at(1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("drop path and dropout") {
  Rng rng(5);
  const TD x = Rand({4, 3}, rng);
  Rng r1(1);
  const TD same = drop_path(x, 0.3, false, r1);
  CHECK(std::vector<double>(same.data().begin(), same.data().end()) ==
        std::vector<double>(x.data().begin(), x.data().end()));
  CHECK(r1.counter() == 0);
  const TD zero_rate = drop_path(x, 0.0, true, r1);
  CHECK(std::vector<double>(zero_rate.data().begin(), zero_rate.data().end()) ==
        std::vector<double>(x.data().begin(), x.data().end()));
  CHECK_THROWS_AS(drop_path(x, 1.0, true, r1), ConfigError);
  CHECK_THROWS_AS(drop_path(x, -0.1, true, r1), ConfigError);

  // Reproducible under a fixed seed; each call keeps or zeroes the whole
  // branch; the mean over many draws approaches x.
  Rng a(9), b(9);
  for (int i = 0; i < 5; ++i) {
    const TD u = drop_path(x, 0.4, true, a);
    const TD v = drop_path(x, 0.4, true, b);
    CHECK(std::vector<double>(u.data().begin(), u.data().end()) ==
          std::vector<double>(v.data().begin(), v.data().end()));
  }
  Rng c(17);
  std::vector<double> acc(x.size(), 0.0);
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const TD u = drop_path(x, 0.4, true, c);
    const bool kept = u.at(0) != 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      CHECK(u.at(j) == doctest::Approx(kept ? x.at(j) / 0.6 : 0.0));
      acc[j] += u.at(j) / draws;
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j) CHECK(acc[j] == doctest::Approx(x.at(j)).epsilon(0.05).scale(1.0));

  Rng d(3);
  const TD big = TD::Full({20000}, 1.0);
  const TD dropped = dropout(big, 0.25, true, d);
  double mean = 0.0;
  for (double v : dropped.data()) {
    CHECK((v == 0.0 || std::abs(v - 1.0 / 0.75) < 1e-12));
    mean += v / 20000.0;
  }
  CHECK(mean == doctest::Approx(1.0).epsilon(0.03));
  Rng e(3);
  const TD inference = dropout(big, 0.25, false, e);
  CHECK(inference.at(0) == 1.0);
}

TEST_CASE("no-grad guard records no graph") {
  TD w = TD::Leaf({2}, {1, 2}, true);
  {
    NoGradGuard guard;
    const TD y = mul(w, w);
    CHECK_FALSE(y.requires_grad());
  }
  CHECK(mul(w, w).requires_grad());
}

TEST_CASE("gradient checks on primitives") {
  Rng rng(31);
  SUBCASE("sum") {
    TD x = Rand({3, 4}, rng);
    CHECK(grad_check([](const TD& v) { return sum(v); }, x) < 1e-10);
  }
  SUBCASE("elementwise") {
    CHECK(CheckOp([](const TD& v) { return relu(v); }, Rand({20}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) { return gelu(v); }, Rand({20}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) { return sigmoid(v); }, Rand({20}, rng)) < kTol);
    std::vector<double> pos(20);
    for (double& p : pos) p = 0.5 + rng.Uniform();
    CHECK(CheckOp([](const TD& v) { return log(v); }, TD::Leaf({20}, pos)) < kTol);
    const TD other = Rand({20}, rng);
    CHECK(CheckOp([&](const TD& v) { return mul(v, other); }, Rand({20}, rng)) < kTol);
    CHECK(CheckOp([&](const TD& v) { return add(v, other); }, Rand({20}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) { return scale(v, 2.5); }, Rand({20}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) { return mean(v); }, Rand({20}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) { return select(v, 7); }, Rand({20}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) { return reshape(v, {5, 4}); }, Rand({20}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) { return transpose(v); }, Rand({4, 5}, rng)) < kTol);
  }
  SUBCASE("linear algebra") {
    for (int trial = 0; trial < 4; ++trial) {
      const int m = 1 + static_cast<int>(rng.Below(5)), k = 1 + static_cast<int>(rng.Below(5)),
                n = 1 + static_cast<int>(rng.Below(5));
      const bool ta = trial & 1, tb = trial & 2;
      const TD b = Rand(tb ? Shape{n, k} : Shape{k, n}, rng);
      const TD a = Rand(ta ? Shape{k, m} : Shape{m, k}, rng);
      CHECK(CheckOp([&](const TD& v) { return matmul(v, b, ta, tb); }, Rand(a.shape(), rng)) < kTol);
      CHECK(CheckOp([&](const TD& v) { return matmul(a, v, ta, tb); }, Rand(b.shape(), rng)) < kTol);
    }
    const TD w = Rand({4, 3}, rng), bias = Rand({3}, rng), x = Rand({2, 5, 4}, rng);
    CHECK(CheckOp([&](const TD& v) { return dense(v, w, bias); }, Rand({2, 5, 4}, rng)) < kTol);
    CHECK(CheckOp([&](const TD& v) { return dense(x, v, bias); }, Rand({4, 3}, rng)) < kTol);
    CHECK(CheckOp([&](const TD& v) { return dense(x, w, v); }, Rand({3}, rng)) < kTol);
  }
  SUBCASE("conv and pool") {
    const int cin = 2, cout = 3, h = 5, wd = 6;
    const TD k = Rand({cout, cin, 3, 3}, rng), b = Rand({cout}, rng), x = Rand({cin, h, wd}, rng);
    CHECK(CheckOp([&](const TD& v) { return conv2d(v, k, b); }, Rand({cin, h, wd}, rng)) < kTol);
    CHECK(CheckOp([&](const TD& v) { return conv2d(x, v, b); }, Rand({cout, cin, 3, 3}, rng)) < kTol);
    CHECK(CheckOp([&](const TD& v) { return conv2d(x, k, v); }, Rand({cout}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) { return maxpool2d(v); }, Rand({2, 4, 6}, rng)) < kTol);
  }
  SUBCASE("normalization and attention") {
    for (int trial = 0; trial < 3; ++trial) {
      const int n = 1 + static_cast<int>(rng.Below(5)), d = 2 * (1 + static_cast<int>(rng.Below(3)));
      const TD g = Rand({d}, rng), b = Rand({d}, rng), x = Rand({n, d}, rng);
      CHECK(CheckOp([](const TD& v) { return softmax(v); }, Rand({n, d}, rng, 2.0)) < kTol);
      CHECK(CheckOp([&](const TD& v) { return layer_norm(v, g, b); }, Rand({n, d}, rng)) < kTol);
      CHECK(CheckOp([&](const TD& v) { return layer_norm(x, v, b); }, Rand({d}, rng)) < kTol);
      CHECK(CheckOp([&](const TD& v) { return layer_norm(x, g, v); }, Rand({d}, rng)) < kTol);
      const TD q = Rand({n, d}, rng), kk = Rand({n, d}, rng), vv = Rand({n, d}, rng);
      CHECK(CheckOp([&](const TD& v) { return attention(v, kk, vv, 2); }, Rand({n, d}, rng)) < kTol);
      CHECK(CheckOp([&](const TD& v) { return attention(q, v, vv, 2); }, Rand({n, d}, rng)) < kTol);
      CHECK(CheckOp([&](const TD& v) { return attention(q, kk, v, 2); }, Rand({n, d}, rng)) < kTol);
      CHECK(CheckOp([&](const TD& v) { return attention(v, v, v, 1); }, Rand({n, d}, rng)) < kTol);
      const TD u = Rand({d, 1}, rng);
      CHECK(CheckOp([&](const TD& v) { return sequence_pool(v, u); }, Rand({n, d}, rng)) < kTol);
      CHECK(CheckOp([&](const TD& v) { return sequence_pool(x, v); }, Rand({d, 1}, rng)) < kTol);
    }
  }
  SUBCASE("regularizers in training mode") {
    // Fixed masks: re-seed the generator on every evaluation.
    CHECK(CheckOp([](const TD& v) {
            Rng r(4);
            return dropout(v, 0.3, true, r);
          },
          Rand({30}, rng)) < kTol);
    CHECK(CheckOp([](const TD& v) {
            Rng r(2);
            return drop_path(v, 0.3, true, r);
          },
          Rand({30}, rng)) < kTol);
  }
}

TEST_CASE("gradient checks on random compositions") {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + static_cast<int>(rng.Below(4)), d = 4;
    const TD w1 = Rand({d, 8}, rng, 0.5), w2 = Rand({8, d}, rng, 0.5), g = Rand({d}, rng), b = Rand({d}, rng);
    const TD u = Rand({d, 1}, rng);
    TD x = Rand({n, d}, rng);
    const double err = grad_check(
        [&](const TD& v) {
          const TD h = gelu(dense(layer_norm(v, g, b), w1, TD()));
          const TD y = add(v, dense(h, w2, TD()));
          return sum(mul(sequence_pool(attention(y, y, y, 2), u), sequence_pool(y, u)));
        },
        x);
    CHECK(err < kTol);
  }
}

TEST_CASE("gradient check steps past a nearby kink") {
  // relu switches 3e-4 from the probe point, inside the default stencil.
  for (double offset : {3e-4, -3e-4, 7e-4}) {
    TD x = TD::Leaf({2}, {0.25, -0.5});
    const TD shift = TD::Leaf({2}, {-0.25 - offset, 0.1});
    const double err = grad_check(
        [&](const TD& v) { return sum(mul(relu(add(v, shift)), TD::Leaf({2}, {2.0, 3.0}))); }, x);
    CHECK(err < 1e-8);
  }
  // A gradient that misses one path still fails.
  TD x = TD::Leaf({3}, {0.3, 0.7, 1.1});
  const double err = grad_check(
      [](const TD& v) {
        TD detached;
        {
          NoGradGuard guard;
          detached = relu(v);
        }
        return sum(mul(relu(v), detached));
      },
      x);
  CHECK(err > 0.3);
}
