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


#ifndef CATKIT_EVAL_HPP_
#define CATKIT_EVAL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "catkit/dsp.hpp"
#include "catkit/models.hpp"
#include "json.hpp"

namespace catkit {

struct ProbabilitySet {
  std::vector<double> probs;

  // Throws InvalidArgument unless every p is in [0, 1] and the sum is
  // 1 within 1e-6.
  void Validate() const;
  // Lowest index among the maxima.
  int argmax() const;
  double p_max() const;
};

// Label value of the unknown category U.
inline constexpr int kUnknown = -1;

struct Decision {
  int label = kUnknown;
  double confidence = 0.0;  // p_m

  bool unknown() const { return label == kUnknown; }
};

Decision attribute_closed(const ProbabilitySet& p);
// Known class only when p_m > threshold (strict); otherwise U.
Decision attribute_open(const ProbabilitySet& p, double threshold);

// Rows are true classes, columns predictions. With open = true the matrix
// has N+1 classes and kUnknown (in either role) maps to index N.
struct ConfusionMatrix {
  int k = 0;
  std::vector<std::int64_t> counts;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int classes)
      : k(classes), counts(static_cast<std::size_t>(classes) * classes, 0) {}
  std::int64_t& at(int truth, int pred) { return counts[static_cast<std::size_t>(truth) * k + pred]; }
  std::int64_t at(int truth, int pred) const { return counts[static_cast<std::size_t>(truth) * k + pred]; }
  std::int64_t total() const;
  std::int64_t support(int truth) const;
};

ConfusionMatrix confusion(std::span<const Decision> decisions, std::span<const int> truths,
                          int num_known, bool open);
// Plain label form; labels must already lie in [0, k).
ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths, int k);

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<double> class_precision;
  std::vector<double> class_recall;
  std::vector<double> class_f1;
  std::vector<std::int64_t> support;
};

Metrics weighted_metrics(const ConfusionMatrix& cm);

enum class BaselineKind { kMinority, kMajority };

// Predicts the least (most) frequent training class for every test sample;
// ties go to the lowest index. Test truths may include kUnknown, which is
// scored as class train_counts.size().
Metrics baseline_constant(BaselineKind kind, std::span<const std::int64_t> train_counts,
                          std::span<const int> test_truths);

// Threshold T from known-class validation outputs: the `quantile` of their
// p_m values, clamped into [1/N, 0.999]. Roughly that fraction of known
// samples then falls to U.
double tune_threshold(std::span<const ProbabilitySet> validation, double quantile);

struct Inference {
  std::vector<ProbabilitySet> probabilities;
  std::vector<std::vector<float>> latents;  // empty unless requested
};

// Inference-mode forwards fanned out over the worker threads.
Inference run_model(const Model<float>& model, std::span<const Spectrogram> inputs,
                    bool keep_latents);

nlohmann::json ToJson(const ConfusionMatrix& cm);
nlohmann::json ToJson(const Metrics& m);

}  // namespace catkit

#endif  // CATKIT_EVAL_HPP_
