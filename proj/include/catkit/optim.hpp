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


#ifndef CATKIT_OPTIM_HPP_
#define CATKIT_OPTIM_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "catkit/models.hpp"

namespace catkit {

enum class OptimizerKind { kAdam, kAdamW };

OptimizerKind ParseOptimizerKind(const std::string& s);  // adam | adamw
std::string ToString(OptimizerKind kind);

struct AdamHyper {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

// First and second moments of one parameter tensor.
template <typename T>
struct Moments {
  std::vector<T> m;
  std::vector<T> v;
};

// One update at step t (t >= 1, already incremented). The decoupled decay
// uses the parameter value from before the update.
template <typename T>
void adamw_step(std::span<T> param, std::span<const T> grad, Moments<T>& state, std::int64_t t,
                const AdamHyper& h);
// Plain Adam: adamw_step with the decay term removed.
template <typename T>
void adam_step(std::span<T> param, std::span<const T> grad, Moments<T>& state, std::int64_t t,
               const AdamHyper& h);

template <typename T>
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, AdamHyper hyper, const ParameterStore<T>& params);

  // Applies one update from the accumulated leaf grads. Leaves without a
  // grad are treated as having a zero gradient.
  void Step(ParameterStore<T>& params);

  std::int64_t step_count() const { return t_; }
  const std::vector<Moments<T>>& moments() const { return moments_; }

 private:
  OptimizerKind kind_;
  AdamHyper hyper_;
  std::vector<Moments<T>> moments_;
  std::int64_t t_ = 0;
};

}  // namespace catkit

#endif  // CATKIT_OPTIM_HPP_
