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

#ifndef CATKIT_LOSSES_HPP_
#define CATKIT_LOSSES_HPP_

#include <span>
#include <string>
#include <vector>

#include "catkit/tensor.hpp"

namespace catkit {

enum class LossKind { kCe, kFl, kPoly1Ce, kPoly1Fl };

LossKind ParseLossKind(const std::string& s);  // ce | fl | poly1ce | poly1fl
std::string ToString(LossKind kind);

struct LossConfig {
  LossKind kind = LossKind::kPoly1Ce;
  double epsilon = 3.3;
  double gamma = 2.0;

  // Kind-specific defaults: epsilon 3.3 for poly-1 CE, 3.0 for poly-1 focal,
  // gamma 2 for the focal variants.
  static LossConfig Defaults(LossKind kind);
  void Validate() const;
};

// Probabilities are clamped from below at this value before taking logs.
inline constexpr double kProbabilityFloor = 1e-12;

// All losses take p, the predicted probability of the true class.
double cross_entropy(double p);
double focal(double p, double gamma);
double poly1_ce(double p, double epsilon);
double poly1_fl(double p, double gamma, double epsilon);

double sample_loss(double p, const LossConfig& cfg);
// d(sample_loss)/dp.
double sample_loss_dp(double p, const LossConfig& cfg);

// Mean of the per-sample losses. Throws LabelError for a target outside the
// probability vector.
double batch_loss(std::span<const std::vector<double>> probabilities, std::span<const int> targets,
                  const LossConfig& cfg);

// Loss of one probability vector as a graph node (gradient flows into the
// probabilities).
template <typename T>
Tensor<T> loss_on_probabilities(const Tensor<T>& probs, int target, const LossConfig& cfg);

// Fused softmax + loss. Same value as loss_on_probabilities(softmax(logits))
// but the logit gradient is evaluated in closed form, p * dL/dp * (onehot - p),
// which stays finite when p underflows.
template <typename T>
Tensor<T> loss_on_logits(const Tensor<T>& logits, int target, const LossConfig& cfg);

}  // namespace catkit

#endif  // CATKIT_LOSSES_HPP_
