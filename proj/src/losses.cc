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

#include "catkit/losses.hpp"

#include <algorithm>
#include <cmath>

#include "catkit/errors.hpp"

namespace catkit {

LossKind ParseLossKind(const std::string& s) {
  if (s == "ce") return LossKind::kCe;
  if (s == "fl") return LossKind::kFl;
  if (s == "poly1ce") return LossKind::kPoly1Ce;
  if (s == "poly1fl") return LossKind::kPoly1Fl;
  throw ConfigError("unknown loss '" + s + "' (expected ce|fl|poly1ce|poly1fl)");
}

std::string ToString(LossKind kind) {
  switch (kind) {
    case LossKind::kCe:
      return "ce";
    case LossKind::kFl:
      return "fl";
    case LossKind::kPoly1Ce:
      return "poly1ce";
    case LossKind::kPoly1Fl:
      return "poly1fl";
  }
  return "ce";
}

LossConfig LossConfig::Defaults(LossKind kind) {
  LossConfig cfg;
  cfg.kind = kind;
  cfg.gamma = 2.0;
  switch (kind) {
    case LossKind::kPoly1Ce:
      cfg.epsilon = 3.3;
      break;
    case LossKind::kPoly1Fl:
      cfg.epsilon = 3.0;
      break;
    default:
      cfg.epsilon = 0.0;
  }
  return cfg;
}

void LossConfig::Validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be >= 0");
  if (!std::isfinite(epsilon)) throw ConfigError("epsilon must be finite");
}

namespace {

double ClampedLog(double p) { return std::log(std::max(p, kProbabilityFloor)); }

// p * dL/dp, written so that p -> 0 and p -> 1 stay finite.
double ScaledDerivative(double p, double log_p, const LossConfig& cfg) {
  const double q = std::max(0.0, 1.0 - p);
  const double gamma = cfg.gamma;
  auto focal_term = [&] {
    double modulated = 0.0;
    if (gamma != 0.0 && q > 0.0) modulated = gamma * p * std::pow(q, gamma - 1.0) * log_p;
    return modulated - std::pow(q, gamma);
  };
  switch (cfg.kind) {
    case LossKind::kCe:
      return -1.0;
    case LossKind::kPoly1Ce:
      return -1.0 - cfg.epsilon * p;
    case LossKind::kFl:
      return focal_term();
    case LossKind::kPoly1Fl:
      return focal_term() - cfg.epsilon * (gamma + 1.0) * std::pow(q, gamma) * p;
  }
  return 0.0;
}

double LossFromLog(double p, double log_p, const LossConfig& cfg) {
  const double q = 1.0 - p;
  switch (cfg.kind) {
    case LossKind::kCe:
      return -log_p;
    case LossKind::kPoly1Ce:
      return -log_p + cfg.epsilon * q;
    case LossKind::kFl:
      return -std::pow(q, cfg.gamma) * log_p;
    case LossKind::kPoly1Fl:
      return -std::pow(q, cfg.gamma) * log_p + cfg.epsilon * std::pow(q, cfg.gamma + 1.0);
  }
  return 0.0;
}

}  // namespace

double cross_entropy(double p) { return -ClampedLog(p); }

double focal(double p, double gamma) { return -std::pow(1.0 - p, gamma) * ClampedLog(p); }

double poly1_ce(double p, double epsilon) { return cross_entropy(p) + epsilon * (1.0 - p); }

double poly1_fl(double p, double gamma, double epsilon) {
  return focal(p, gamma) + epsilon * std::pow(1.0 - p, gamma + 1.0);
}

double sample_loss(double p, const LossConfig& cfg) {
  switch (cfg.kind) {
    case LossKind::kCe:
      return cross_entropy(p);
    case LossKind::kFl:
      return focal(p, cfg.gamma);
    case LossKind::kPoly1Ce:
      return poly1_ce(p, cfg.epsilon);
    case LossKind::kPoly1Fl:
      return poly1_fl(p, cfg.gamma, cfg.epsilon);
  }
  return 0.0;
}

double sample_loss_dp(double p, const LossConfig& cfg) {
  const double pc = std::max(p, kProbabilityFloor);
  return ScaledDerivative(pc, std::log(pc), cfg) / pc;
}

double batch_loss(std::span<const std::vector<double>> probabilities, std::span<const int> targets,
                  const LossConfig& cfg) {
  if (probabilities.size() != targets.size()) {
    throw InvalidArgument("batch_loss: probabilities and targets differ in length");
  }
  if (probabilities.empty()) throw InvalidArgument("batch_loss: empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const int t = targets[i];
    if (t < 0 || static_cast<std::size_t>(t) >= probabilities[i].size()) {
      throw LabelError("target " + std::to_string(t) + " outside [0, " +
                       std::to_string(probabilities[i].size()) + ")");
    }
    total += sample_loss(probabilities[i][t], cfg);
  }
  return total / static_cast<double>(targets.size());
}

namespace {

void CheckTarget(std::size_t n, int target) {
  if (target < 0 || static_cast<std::size_t>(target) >= n) {
    throw LabelError("target " + std::to_string(target) + " outside [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

template <typename T>
Tensor<T> loss_on_probabilities(const Tensor<T>& probs, int target, const LossConfig& cfg) {
  CheckTarget(probs.size(), target);
  const double p = static_cast<double>(probs.at(target));
  const double value = sample_loss(p, cfg);
  // Zero slope inside the clamp, matching the clamped value.
  const double slope = p < kProbabilityFloor ? 0.0 : sample_loss_dp(p, cfg);
  return Tensor<T>::FromOp({1}, {static_cast<T>(value)}, {probs},
                           [target, slope](Node<T>& self) {
                             Node<T>& parent = *self.parents[0];
                             if (!parent.requires_grad) return;
                             parent.EnsureGrad()[target] += self.grad[0] * static_cast<T>(slope);
                           });
}

template <typename T>
Tensor<T> loss_on_logits(const Tensor<T>& logits, int target, const LossConfig& cfg) {
  const std::size_t n = logits.size();
  CheckTarget(n, target);
  const auto z = logits.data();
  double zmax = -INFINITY;
  for (T v : z) zmax = std::max(zmax, static_cast<double>(v));
  double denom = 0.0;
  for (T v : z) denom += std::exp(static_cast<double>(v) - zmax);
  const double log_denom = std::log(denom);
  auto probs = std::make_shared<std::vector<double>>(n);
  for (std::size_t j = 0; j < n; ++j) {
    (*probs)[j] = std::exp(static_cast<double>(z[j]) - zmax - log_denom);
  }
  const double log_p = static_cast<double>(z[target]) - zmax - log_denom;
  const double p = (*probs)[target];
  const double value = LossFromLog(p, std::max(log_p, std::log(kProbabilityFloor)), cfg);
  const double scaled = ScaledDerivative(p, log_p, cfg);
  return Tensor<T>::FromOp(
      {1}, {static_cast<T>(value)}, {logits}, [=](Node<T>& self) {
        Node<T>& parent = *self.parents[0];
        if (!parent.requires_grad) return;
        auto& g = parent.EnsureGrad();
        const double up = static_cast<double>(self.grad[0]);
        for (std::size_t j = 0; j < n; ++j) {
          const double onehot = j == static_cast<std::size_t>(target) ? 1.0 : 0.0;
          g[j] += static_cast<T>(up * scaled * (onehot - (*probs)[j]));
        }
      });
}

template Tensor<float> loss_on_probabilities<float>(const Tensor<float>&, int, const LossConfig&);
template Tensor<double> loss_on_probabilities<double>(const Tensor<double>&, int,
                                                      const LossConfig&);
template Tensor<float> loss_on_logits<float>(const Tensor<float>&, int, const LossConfig&);
template Tensor<double> loss_on_logits<double>(const Tensor<double>&, int, const LossConfig&);

}  // namespace catkit
