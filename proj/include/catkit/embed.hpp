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


#ifndef CATKIT_EMBED_HPP_
#define CATKIT_EMBED_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "catkit/dsp.hpp"
#include "json.hpp"

namespace catkit {

// Matrices here reuse Grid: rows are points, columns features.

struct TsneConfig {
  double perplexity = 50.0;
  int iterations = 1500;
  double learning_rate = 200.0;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  int momentum_switch = 250;
  double exaggeration = 4.0;
  int exaggeration_iterations = 100;
  double init_std = 1e-4;
  std::uint64_t seed = 0;

  void Validate(int n) const;
};

// Row i holds p_{j|i}. Each row's Gaussian precision is bisected in log
// space until 2^H(P_i) is within `tol` of the perplexity or `max_steps`
// halvings are spent.
Grid conditional_affinities(const Grid& x, double perplexity, double tol = 1e-5,
                            int max_steps = 50);

// 2^H of one affinity row, entropy in bits.
double row_perplexity(std::span<const double> row);

// (p_{j|i} + p_{i|j}) / 2n.
Grid joint_affinities(const Grid& conditional);

// Student-t (one degree of freedom) similarities of an embedding,
// normalized over all off-diagonal pairs.
Grid student_t_affinities(const Grid& y);

// Sum over off-diagonal entries of p log(p / q), both clamped at 1e-12.
double kl_divergence(const Grid& p, const Grid& q);
double kl_divergence(std::span<const double> p, std::span<const double> q);

struct TsneResult {
  Grid y;  // n x 2, centered
  double initial_kl = 0.0;
  double final_kl = 0.0;
};

TsneResult tsne(const Grid& x, const TsneConfig& cfg);

struct KMeansResult {
  std::vector<int> assignment;
  Grid centers;
  double inertia = 0.0;
};

// k-means++ seeding followed by Lloyd iterations; best of `restarts`.
KMeansResult kmeans(const Grid& x, int k, std::uint64_t seed, int restarts = 20,
                    int max_iterations = 300);

struct LabelPurity {
  std::string label;
  std::size_t count = 0;
  // Fraction of this label's points sitting in clusters it dominates.
  double purity = 0.0;
  // Some cluster has this label as its majority.
  bool owns_cluster = false;
};

struct ClusterReport {
  int clusters = 0;
  double purity = 0.0;
  std::vector<LabelPurity> labels;  // sorted by label
  std::vector<int> assignment;
};

// k = number of distinct labels. Majority ties go to the label that sorts
// first.
ClusterReport cluster_report(const Grid& y, std::span<const std::string> labels,
                             std::uint64_t seed, int restarts = 20);

nlohmann::json ToJson(const ClusterReport& r);

// At most max_points indices, shared out per label in proportion to its
// count (at least one each), chosen by a seeded shuffle. Sorted ascending.
std::vector<std::size_t> stratified_subsample(std::span<const std::string> labels,
                                              std::size_t max_points, std::uint64_t seed);

}  // namespace catkit

#endif  // CATKIT_EMBED_HPP_
