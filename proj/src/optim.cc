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


#include "catkit/optim.hpp"

#include <cmath>

#include "catkit/errors.hpp"

namespace catkit {

OptimizerKind ParseOptimizerKind(const std::string& s) {
  if (s == "adam") return OptimizerKind::kAdam;
  if (s == "adamw") return OptimizerKind::kAdamW;
  throw ConfigError("unknown optimizer '" + s + "' (expected adam|adamw)");
}

std::string ToString(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "adamw";
}

namespace {

template <typename T>
void Update(std::span<T> param, std::span<const T> grad, Moments<T>& s, std::int64_t t,
            const AdamHyper& h, double decay) {
  if (param.size() != grad.size()) throw ShapeError("parameter and gradient sizes differ");
  if (t < 1) throw InvalidArgument("optimizer step must be >= 1");
  if (s.m.size() != param.size()) s.m.assign(param.size(), T(0));
  if (s.v.size() != param.size()) s.v.assign(param.size(), T(0));
  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(t));
  const double b1 = h.beta1, b2 = h.beta2;
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    const double m = b1 * s.m[i] + (1.0 - b1) * g;
    const double v = b2 * s.v[i] + (1.0 - b2) * g * g;
    s.m[i] = static_cast<T>(m);
    s.v[i] = static_cast<T>(v);
    const double theta = param[i];
    const double step = h.lr * (m / c1) / (std::sqrt(v / c2) + h.eps);
    param[i] = static_cast<T>(theta - step - h.lr * decay * theta);
  }
}

}  // namespace

template <typename T>
void adamw_step(std::span<T> param, std::span<const T> grad, Moments<T>& state, std::int64_t t,
                const AdamHyper& h) {
  Update(param, grad, state, t, h, h.weight_decay);
}

template <typename T>
void adam_step(std::span<T> param, std::span<const T> grad, Moments<T>& state, std::int64_t t,
               const AdamHyper& h) {
  Update(param, grad, state, t, h, 0.0);
}

template <typename T>
Optimizer<T>::Optimizer(OptimizerKind kind, AdamHyper hyper, const ParameterStore<T>& params)
    : kind_(kind), hyper_(hyper), moments_(params.entries().size()) {
  if (!(hyper.lr >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (!(hyper.weight_decay >= 0.0)) throw ConfigError("weight decay must be >= 0");
}

template <typename T>
void Optimizer<T>::Step(ParameterStore<T>& params) {
  auto& entries = params.entries();
  if (entries.size() != moments_.size()) throw ShapeError("parameter store changed shape");
  ++t_;
  std::vector<T> zeros;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Tensor<T>& p = entries[i].second;
    std::span<const T> g = p.grad();
    if (!p.has_grad()) {
      zeros.assign(p.size(), T(0));
      g = zeros;
    }
    if (kind_ == OptimizerKind::kAdamW) {
      adamw_step<T>(p.mutable_data(), g, moments_[i], t_, hyper_);
    } else {
      adam_step<T>(p.mutable_data(), g, moments_[i], t_, hyper_);
    }
  }
}

#define CATKIT_INSTANTIATE(T)                                                                  \
  template void adamw_step<T>(std::span<T>, std::span<const T>, Moments<T>&, std::int64_t,     \
                              const AdamHyper&);                                               \
  template void adam_step<T>(std::span<T>, std::span<const T>, Moments<T>&, std::int64_t,      \
                             const AdamHyper&);                                                \
  template class Optimizer<T>;

CATKIT_INSTANTIATE(float)
CATKIT_INSTANTIATE(double)
#undef CATKIT_INSTANTIATE

}  // namespace catkit
