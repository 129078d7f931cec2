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


#include "catkit/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "catkit/errors.hpp"
#include "catkit/rng.hpp"

namespace catkit {

namespace {

constexpr double kClamp = 1e-12;

Grid SquaredDistances(const Grid& x) {
  const int n = x.rows, d = x.cols;
  Grid out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int c = 0; c < d; ++c) {
        const double diff = x.at(i, c) - x.at(j, c);
        s += diff * diff;
      }
      out.at(i, j) = s;
      out.at(j, i) = s;
    }
  }
  return out;
}

// Fills row with normalized exp(-beta (d - dmin)) and returns the entropy in
// nats.
double FillRow(const Grid& d2, int i, double beta, double dmin, std::vector<double>& row) {
  const int n = d2.rows;
  double total = 0.0, weighted = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) {
      row[static_cast<std::size_t>(j)] = 0.0;
      continue;
    }
    const double shifted = d2.at(i, j) - dmin;
    const double w = std::exp(-beta * shifted);
    row[static_cast<std::size_t>(j)] = w;
    total += w;
    weighted += w * shifted;
  }
  for (double& v : row) v /= total;
  return std::log(total) + beta * weighted / total;
}

}  // namespace

void TsneConfig::Validate(int n) const {
  if (n < 5) throw DataError("tSNE needs at least 5 points");
  if (!(perplexity > 0.0 && perplexity < n)) throw ConfigError("perplexity must lie in (0, n)");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(exaggeration >= 1.0) || exaggeration_iterations < 0) throw ConfigError("bad exaggeration");
  if (!(init_std > 0.0)) throw ConfigError("init std must be positive");
}

double row_perplexity(std::span<const double> row) {
  double h = 0.0;
  for (double p : row) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::exp2(h);
}

Grid conditional_affinities(const Grid& x, double perplexity, double tol, int max_steps) {
  const int n = x.rows;
  if (n < 2) throw DataError("need at least 2 points");
  if (!(perplexity > 0.0 && perplexity < n)) throw ConfigError("perplexity must lie in (0, n)");
  for (double v : x.values) {
    if (!std::isfinite(v)) throw DataError("non-finite input coordinate");
  }
  const Grid d2 = SquaredDistances(x);
  for (double v : d2.values) {
    if (!std::isfinite(v)) throw DataError("non-finite pairwise distance");
  }
  Grid p(n, n);
  std::vector<double> row(static_cast<std::size_t>(n));
  const double target = std::log(perplexity);
  for (int i = 0; i < n; ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    double dmean = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dmin = std::min(dmin, d2.at(i, j));
      dmean += d2.at(i, j);
    }
    dmean /= n - 1;
    // Relative floor keeps exp(log_beta) finite for equidistant rows.
    const double spread = std::max(dmean - dmin, 1e-12 * (dmean > 0.0 ? dmean : 1.0));
    // Bracket log(beta) around the inverse spread of the row.
    double lo = std::log(1.0 / spread) - 40.0;
    double hi = std::log(1.0 / spread) + 40.0;
    double log_beta = 0.5 * (lo + hi);
    for (int step = 0; step < max_steps; ++step) {
      const double h = FillRow(d2, i, std::exp(log_beta), dmin, row);
      if (std::abs(std::exp(h) - perplexity) < tol) break;
      // Entropy falls as beta grows.
      if (h > target) {
        lo = log_beta;
      } else {
        hi = log_beta;
      }
      log_beta = 0.5 * (lo + hi);
      if (step + 1 == max_steps) FillRow(d2, i, std::exp(log_beta), dmin, row);
    }
    std::copy(row.begin(), row.end(), p.values.begin() + static_cast<std::ptrdiff_t>(i) * n);
  }
  return p;
}

Grid joint_affinities(const Grid& c) {
  const int n = c.rows;
  Grid p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p.at(i, j) = (c.at(i, j) + c.at(j, i)) / (2.0 * n);
  }
  return p;
}

Grid student_t_affinities(const Grid& y) {
  const int n = y.rows;
  Grid q = SquaredDistances(y);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      q.at(i, j) = i == j ? 0.0 : 1.0 / (1.0 + q.at(i, j));
      total += q.at(i, j);
    }
  }
  for (double& v : q.values) v /= total;
  return q;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ShapeError("KL inputs differ in size");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = std::max(p[i], kClamp);
    const double b = std::max(q[i], kClamp);
    kl += a * std::log(a / b);
  }
  return kl;
}

double kl_divergence(const Grid& p, const Grid& q) {
  if (p.rows != q.rows || p.cols != q.cols || p.rows != p.cols) {
    throw ShapeError("KL needs two square matrices of equal size");
  }
  double kl = 0.0;
  for (int i = 0; i < p.rows; ++i) {
    for (int j = 0; j < p.cols; ++j) {
      if (i == j) continue;
      const double a = std::max(p.at(i, j), kClamp);
      const double b = std::max(q.at(i, j), kClamp);
      kl += a * std::log(a / b);
    }
  }
  return kl;
}

TsneResult tsne(const Grid& x, const TsneConfig& cfg) {
  const int n = x.rows;
  cfg.Validate(n);
  const Grid p = joint_affinities(conditional_affinities(x, cfg.perplexity));

  Rng rng(cfg.seed);
  Grid y(n, 2);
  for (double& v : y.values) v = cfg.init_std * rng.Normal();

  TsneResult result;
  result.initial_kl = kl_divergence(p, student_t_affinities(y));

  Grid velocity(n, 2), gains(n, 2, 1.0), grad(n, 2);
  std::vector<double> num(static_cast<std::size_t>(n) * n);
  for (int it = 0; it < cfg.iterations; ++it) {
    const double exag = it < cfg.exaggeration_iterations ? cfg.exaggeration : 1.0;
    const double momentum = it < cfg.momentum_switch ? cfg.momentum_initial : cfg.momentum_final;

    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      num[static_cast<std::size_t>(i) * n + i] = 0.0;
      for (int j = i + 1; j < n; ++j) {
        const double dx = y.at(i, 0) - y.at(j, 0);
        const double dy = y.at(i, 1) - y.at(j, 1);
        const double w = 1.0 / (1.0 + dx * dx + dy * dy);
        num[static_cast<std::size_t>(i) * n + j] = w;
        num[static_cast<std::size_t>(j) * n + i] = w;
        z += 2.0 * w;
      }
    }
    for (int i = 0; i < n; ++i) {
      double g0 = 0.0, g1 = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double w = num[static_cast<std::size_t>(i) * n + j];
        const double coeff = (exag * p.at(i, j) - w / z) * w;
        g0 += coeff * (y.at(i, 0) - y.at(j, 0));
        g1 += coeff * (y.at(i, 1) - y.at(j, 1));
      }
      grad.at(i, 0) = 4.0 * g0;
      grad.at(i, 1) = 4.0 * g1;
    }
    for (std::size_t k = 0; k < y.values.size(); ++k) {
      const double g = grad.values[k];
      double& gain = gains.values[k];
      gain = (g > 0.0) != (velocity.values[k] > 0.0) ? gain + 0.2 : gain * 0.8;
      gain = std::max(gain, 0.01);
      velocity.values[k] = momentum * velocity.values[k] - cfg.learning_rate * gain * g;
      y.values[k] += velocity.values[k];
    }
    double m0 = 0.0, m1 = 0.0;
    for (int i = 0; i < n; ++i) {
      m0 += y.at(i, 0);
      m1 += y.at(i, 1);
    }
    m0 /= n;
    m1 /= n;
    for (int i = 0; i < n; ++i) {
      y.at(i, 0) -= m0;
      y.at(i, 1) -= m1;
    }
  }
  result.final_kl = kl_divergence(p, student_t_affinities(y));
  result.y = std::move(y);
  return result;
}

namespace {

double Dist2(const Grid& x, int i, const Grid& c, int j) {
  double s = 0.0;
  for (int d = 0; d < x.cols; ++d) {
    const double diff = x.at(i, d) - c.at(j, d);
    s += diff * diff;
  }
  return s;
}

KMeansResult KMeansOnce(const Grid& x, int k, Rng& rng, int max_iterations) {
  const int n = x.rows, d = x.cols;
  Grid centers(k, d);
  std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  int first = static_cast<int>(rng.Below(static_cast<std::uint64_t>(n)));
  for (int c = 0; c < d; ++c) centers.at(0, c) = x.at(first, c);
  for (int m = 1; m < k; ++m) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      nearest[static_cast<std::size_t>(i)] =
          std::min(nearest[static_cast<std::size_t>(i)], Dist2(x, i, centers, m - 1));
      total += nearest[static_cast<std::size_t>(i)];
    }
    int pick = n - 1;
    if (total > 0.0) {
      double r = rng.Uniform() * total;
      for (int i = 0; i < n; ++i) {
        r -= nearest[static_cast<std::size_t>(i)];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<int>(rng.Below(static_cast<std::uint64_t>(n)));
    }
    for (int c = 0; c < d; ++c) centers.at(m, c) = x.at(pick, c);
  }

  KMeansResult r;
  r.assignment.assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = Dist2(x, i, centers, 0);
      for (int m = 1; m < k; ++m) {
        const double dm = Dist2(x, i, centers, m);
        if (dm < best_d) {
          best_d = dm;
          best = m;
        }
      }
      if (r.assignment[static_cast<std::size_t>(i)] != best) {
        r.assignment[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;
    Grid sums(k, d);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      const int a = r.assignment[static_cast<std::size_t>(i)];
      ++counts[static_cast<std::size_t>(a)];
      for (int c = 0; c < d; ++c) sums.at(a, c) += x.at(i, c);
    }
    for (int m = 0; m < k; ++m) {
      if (counts[static_cast<std::size_t>(m)] == 0) continue;  // keep the old center
      for (int c = 0; c < d; ++c) centers.at(m, c) = sums.at(m, c) / counts[static_cast<std::size_t>(m)];
    }
  }
  r.inertia = 0.0;
  for (int i = 0; i < n; ++i) r.inertia += Dist2(x, i, centers, r.assignment[static_cast<std::size_t>(i)]);
  r.centers = std::move(centers);
  return r;
}

}  // namespace

KMeansResult kmeans(const Grid& x, int k, std::uint64_t seed, int restarts, int max_iterations) {
  if (k < 1 || k > x.rows) throw ConfigError("k must lie in [1, n]");
  if (restarts < 1 || max_iterations < 1) throw ConfigError("restarts and iterations must be >= 1");
  const Rng root(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng = root.Fork(static_cast<std::uint64_t>(r));
    KMeansResult cur = KMeansOnce(x, k, rng, max_iterations);
    if (cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

ClusterReport cluster_report(const Grid& y, std::span<const std::string> labels,
                             std::uint64_t seed, int restarts) {
  if (static_cast<int>(labels.size()) != y.rows) throw ShapeError("one label per point required");
  if (labels.empty()) throw DataError("no points to cluster");
  std::map<std::string, int> ids;
  for (const auto& l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [name, id] : ids) id = next++;
  const int k = next;

  ClusterReport rep;
  rep.clusters = k;
  rep.assignment = kmeans(y, k, seed, restarts).assignment;

  std::vector<std::vector<std::size_t>> counts(static_cast<std::size_t>(k),
                                               std::vector<std::size_t>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++counts[static_cast<std::size_t>(rep.assignment[i])][static_cast<std::size_t>(ids[labels[i]])];
  }
  std::vector<int> majority(static_cast<std::size_t>(k), -1);
  for (int c = 0; c < k; ++c) {
    const auto& row = counts[static_cast<std::size_t>(c)];
    const auto top = std::max_element(row.begin(), row.end());
    if (*top > 0) majority[static_cast<std::size_t>(c)] = static_cast<int>(top - row.begin());
  }
  std::vector<LabelPurity> per(static_cast<std::size_t>(k));
  for (const auto& [name, id] : ids) per[static_cast<std::size_t>(id)].label = name;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int id = ids[labels[i]];
    auto& lp = per[static_cast<std::size_t>(id)];
    ++lp.count;
    if (majority[static_cast<std::size_t>(rep.assignment[i])] == id) {
      ++matched;
      lp.purity += 1.0;
    }
  }
  for (auto& lp : per) lp.purity /= static_cast<double>(lp.count);
  for (int c = 0; c < k; ++c) {
    if (majority[static_cast<std::size_t>(c)] >= 0) {
      per[static_cast<std::size_t>(majority[static_cast<std::size_t>(c)])].owns_cluster = true;
    }
  }
  rep.purity = static_cast<double>(matched) / static_cast<double>(labels.size());
  rep.labels = std::move(per);
  return rep;
}

nlohmann::json ToJson(const ClusterReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& lp : r.labels) {
    per.push_back({{"synthesizer", lp.label},
                   {"count", lp.count},
                   {"purity", lp.purity},
                   {"owns_cluster", lp.owns_cluster}});
  }
  return {{"clusters", r.clusters}, {"purity", r.purity}, {"per_synthesizer", per}};
}

std::vector<std::size_t> stratified_subsample(std::span<const std::string> labels,
                                              std::size_t max_points, std::uint64_t seed) {
  std::vector<std::size_t> all(labels.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (labels.size() <= max_points) return all;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  if (max_points < groups.size()) throw ConfigError("fewer points allowed than labels present");
  const Rng root(seed);
  std::vector<std::size_t> out;
  std::uint64_t g = 0;
  for (auto& [name, idx] : groups) {
    const double share = static_cast<double>(max_points) * static_cast<double>(idx.size()) /
                         static_cast<double>(labels.size());
    const auto take = std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(share)), 1, idx.size());
    Rng rng = root.Fork(g++);
    std::shuffle(idx.begin(), idx.end(), rng);
    out.insert(out.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace catkit
