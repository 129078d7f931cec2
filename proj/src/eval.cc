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


#include "catkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "catkit/errors.hpp"
#include "catkit/parallel.hpp"

namespace catkit {

void ProbabilitySet::Validate() const {
  if (probs.empty()) throw InvalidArgument("empty probability set");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability outside [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw InvalidArgument("probabilities do not sum to 1");
}

int ProbabilitySet::argmax() const {
  if (probs.empty()) throw InvalidArgument("empty probability set");
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

double ProbabilitySet::p_max() const { return probs[static_cast<std::size_t>(argmax())]; }

Decision attribute_closed(const ProbabilitySet& p) {
  p.Validate();
  const int m = p.argmax();
  return {m, p.probs[static_cast<std::size_t>(m)]};
}

Decision attribute_open(const ProbabilitySet& p, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
  Decision d = attribute_closed(p);
  if (!(d.confidence > threshold)) d.label = kUnknown;
  return d;
}

std::int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::support(int truth) const {
  std::int64_t s = 0;
  for (int j = 0; j < k; ++j) s += at(truth, j);
  return s;
}

ConfusionMatrix confusion(std::span<const Decision> decisions, std::span<const int> truths,
                          int num_known, bool open) {
  if (decisions.size() != truths.size()) throw ShapeError("decision and truth counts differ");
  const int k = open ? num_known + 1 : num_known;
  auto index = [&](int label, const char* role) {
    if (label == kUnknown) {
      if (!open) throw LabelError(std::string("unknown ") + role + " in a closed-set evaluation");
      return num_known;
    }
    if (label < 0 || label >= num_known) {
      throw LabelError(std::string(role) + " label " + std::to_string(label) + " out of range");
    }
    return label;
  };
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < truths.size(); ++i) {
    ++cm.at(index(truths[i], "truth"), index(decisions[i].label, "prediction"));
  }
  return cm;
}

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths, int k) {
  if (predictions.size() != truths.size()) throw ShapeError("prediction and truth counts differ");
  if (k < 1) throw InvalidArgument("need at least one class");
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] < 0 || truths[i] >= k || predictions[i] < 0 || predictions[i] >= k) {
      throw LabelError("label out of range");
    }
    ++cm.at(truths[i], predictions[i]);
  }
  return cm;
}

Metrics weighted_metrics(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (cm.k < 1 || total == 0) throw DataError("empty confusion matrix");
  Metrics m;
  const auto k = static_cast<std::size_t>(cm.k);
  m.class_precision.assign(k, 0.0);
  m.class_recall.assign(k, 0.0);
  m.class_f1.assign(k, 0.0);
  m.support.assign(k, 0);
  std::int64_t trace = 0;
  for (int c = 0; c < cm.k; ++c) {
    const std::int64_t tp = cm.at(c, c);
    std::int64_t predicted = 0;
    for (int r = 0; r < cm.k; ++r) predicted += cm.at(r, c);
    const std::int64_t support = cm.support(c);
    trace += tp;
    const auto ci = static_cast<std::size_t>(c);
    m.support[ci] = support;
    const double p = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    const double r = support > 0 ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    m.class_precision[ci] = p;
    m.class_recall[ci] = r;
    m.class_f1[ci] = p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
    const double w = static_cast<double>(support) / static_cast<double>(total);
    m.precision += w * p;
    m.recall += w * r;
    m.f1 += w * m.class_f1[ci];
  }
  m.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  return m;
}

Metrics baseline_constant(BaselineKind kind, std::span<const std::int64_t> train_counts,
                          std::span<const int> test_truths) {
  if (train_counts.empty()) throw InvalidArgument("no training classes");
  std::size_t pick = 0;
  for (std::size_t c = 1; c < train_counts.size(); ++c) {
    const bool better = kind == BaselineKind::kMajority ? train_counts[c] > train_counts[pick]
                                                        : train_counts[c] < train_counts[pick];
    if (better) pick = c;
  }
  const int n = static_cast<int>(train_counts.size());
  const bool open = std::find(test_truths.begin(), test_truths.end(), kUnknown) != test_truths.end();
  std::vector<Decision> decisions(test_truths.size(), Decision{static_cast<int>(pick), 1.0});
  return weighted_metrics(confusion(decisions, test_truths, n, open));
}

double tune_threshold(std::span<const ProbabilitySet> validation, double quantile) {
  if (validation.empty()) throw DataError("no validation outputs to tune a threshold on");
  if (!(quantile >= 0.0 && quantile < 1.0)) throw ConfigError("quantile must lie in [0, 1)");
  std::vector<double> pm;
  pm.reserve(validation.size());
  for (const auto& p : validation) pm.push_back(p.p_max());
  std::sort(pm.begin(), pm.end());
  const auto idx = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(pm.size() - 1)));
  const double floor_t = 1.0 / static_cast<double>(validation.front().probs.size());
  return std::clamp(pm[idx], floor_t, 0.999);
}

Inference run_model(const Model<float>& model, std::span<const Spectrogram> inputs,
                    bool keep_latents) {
  tune_allocator();
  Inference out;
  out.probabilities.resize(inputs.size());
  if (keep_latents) out.latents.resize(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    NoGradGuard no_grad;
    const ModelOutput<float> o = model.Forward(inputs[i]);
    const auto p = o.probabilities.data();
    out.probabilities[i].probs.assign(p.begin(), p.end());
    if (keep_latents) {
      const auto z = o.latent.data();
      out.latents[i].assign(z.begin(), z.end());
    }
  });
  return out;
}

nlohmann::json ToJson(const ConfusionMatrix& cm) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < cm.k; ++r) {
    std::vector<std::int64_t> row(cm.counts.begin() + r * cm.k, cm.counts.begin() + (r + 1) * cm.k);
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json ToJson(const Metrics& m) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"class_precision", m.class_precision},
          {"class_recall", m.class_recall},
          {"class_f1", m.class_f1},
          {"support", m.support}};
}

}  // namespace catkit
