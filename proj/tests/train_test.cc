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
#include <vector>

#include "catkit/errors.hpp"
#include "catkit/eval.hpp"
#include "catkit/optim.hpp"
#include "catkit/train.hpp"
#include "doctest.h"

using namespace catkit;

namespace {

double Step(double theta, double g, double lr, double wd, bool decoupled) {
  std::vector<double> p = {theta}, gr = {g};
  Moments<double> m;
  AdamHyper h;
  h.lr = lr;
  h.weight_decay = wd;
  if (decoupled) {
    adamw_step<double>(p, gr, m, 1, h);
  } else {
    adam_step<double>(p, gr, m, 1, h);
  }
  return p[0];
}

// Class 0 lights the upper rows, class 1 the lower rows, plus noise.
Dataset Bands(int per_class, std::uint64_t seed, int classes = 2) {
  Rng rng(seed);
  Dataset d;
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      Spectrogram s;
      const int band = kSpectrogramSize / classes;
      for (int r = 0; r < kSpectrogramSize; ++r) {
        for (int col = 0; col < kSpectrogramSize; ++col) {
          const double base = (r / band == c) ? 0.7 : 0.2;
          s.at(r, col) = static_cast<float>(std::clamp(base + 0.1 * rng.Normal(), 0.0, 1.0));
        }
      }
      d.inputs.push_back(std::move(s));
      d.labels.push_back(c);
      d.paths.push_back("s" + std::to_string(c) + "_" + std::to_string(i));
      d.synthesizers.push_back("c" + std::to_string(c));
      d.known.push_back(true);
    }
  }
  return d;
}

MlpConfig SmallMlp(int classes = 2) {
  MlpConfig m;
  m.hidden = {8, 8};
  m.num_classes = classes;
  return m;
}

TrainConfig FastConfig() {
  TrainConfig c = TrainConfig::Defaults(Arch::kMlp);
  c.epochs = 100;
  c.patience = 100;
  c.batch_size = 8;
  c.lr = 1e-3;
  c.seed = 3;
  c.validation_fraction = 0.2;
  c.loss = LossConfig::Defaults(LossKind::kCe);
  return c;
}

}  // namespace

TEST_CASE("adamw single-step examples") {
  CHECK(Step(1.0, 1.0, 0.1, 0.0, true) == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(Step(1.0, 1.0, 0.1, 0.1, true) == doctest::Approx(0.89).epsilon(1e-9));
  CHECK(Step(2.0, 0.0, 0.1, 0.1, true) == doctest::Approx(2.0 - 0.1 * 0.1 * 2.0).epsilon(1e-12));
  // Adam ignores the decay term.
  CHECK(Step(1.0, 1.0, 0.1, 0.1, false) == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(Step(2.0, 0.0, 0.1, 0.0, false) == 2.0);
  CHECK(Step(-3.0, -1.0, 0.1, 0.0, false) == doctest::Approx(-2.9).epsilon(1e-9));
}

TEST_CASE("zero learning rate leaves parameters untouched") {
  Rng rng(2);
  std::vector<double> p(50), g(50);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = rng.Normal();
    g[i] = rng.Normal();
  }
  const auto before = p;
  Moments<double> m;
  AdamHyper h;
  h.lr = 0.0;
  h.weight_decay = 0.5;
  for (int t = 1; t <= 5; ++t) adamw_step<double>(p, g, m, t, h);
  CHECK(p == before);
}

TEST_CASE("adam moments follow the recurrence over several steps") {
  AdamHyper h;
  h.lr = 0.01;
  const std::vector<double> grads = {0.5, -1.0, 2.0, 0.25};
  std::vector<double> p = {1.0};
  Moments<double> state;
  double m = 0, v = 0, theta = 1.0;
  for (std::size_t t = 1; t <= grads.size(); ++t) {
    std::vector<double> g = {grads[t - 1]};
    adam_step<double>(p, g, state, static_cast<std::int64_t>(t), h);
    m = h.beta1 * m + (1 - h.beta1) * grads[t - 1];
    v = h.beta2 * v + (1 - h.beta2) * grads[t - 1] * grads[t - 1];
    const double mh = m / (1 - std::pow(h.beta1, t)), vh = v / (1 - std::pow(h.beta2, t));
    theta -= h.lr * mh / (std::sqrt(vh) + h.eps);
    CHECK(p[0] == doctest::Approx(theta).epsilon(1e-12));
  }
  CHECK_THROWS_AS(adam_step<double>(p, std::vector<double>{1.0, 2.0}, state, 5, h), ShapeError);
}

TEST_CASE("optimizer object steps every leaf") {
  auto model = Model<double>::Create(SmallMlp(), 1);
  Optimizer<double> opt(OptimizerKind::kAdamW, AdamHyper{0.1, 0.9, 0.999, 1e-8, 0.0}, model.params());
  auto& w = model.params().Get("head.weight");
  std::vector<double> pick(w.size(), 0.0);
  pick[0] = 1.0;
  backward(sum(mul(w, Tensor<double>::Leaf(w.shape(), pick))));
  const double w0 = w.at(0), w1 = w.at(1);
  opt.Step(model.params());
  CHECK(opt.step_count() == 1);
  CHECK(w.at(0) == doctest::Approx(w0 - 0.1).epsilon(1e-6));
  CHECK(w.at(1) == w1);
}

TEST_CASE("config defaults and validation") {
  const TrainConfig cat = TrainConfig::Defaults(Arch::kCat);
  CHECK(cat.lr == 1e-4);
  CHECK(cat.weight_decay == 1e-4);
  CHECK(cat.epochs == 100);
  CHECK(cat.patience == 10);
  CHECK(cat.batch_size == 128);
  CHECK(cat.optimizer == OptimizerKind::kAdamW);
  const TrainConfig cnn = TrainConfig::Defaults(Arch::kCnn);
  CHECK(cnn.lr == 1e-3);
  CHECK(cnn.optimizer == OptimizerKind::kAdam);
  const TrainConfig mlp = TrainConfig::Defaults(Arch::kMlp);
  CHECK(mlp.lr == 1e-4);
  CHECK(mlp.epochs == 200);
  CHECK(mlp.batch_size == 200);

  TrainConfig c = cat;
  c.patience = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = cat;
  c.patience = 101;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = cat;
  c.validation_fraction = 0.0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c.validation_fraction = 0.5;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = cat;
  c.batch_size = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = cat;
  c.lr = -1;
  CHECK_THROWS_AS(c.Validate(), ConfigError);

  const TrainConfig back = TrainConfigFromJson(ToJson(cnn), cat);
  CHECK(ToJson(back) == ToJson(cnn));
  const TrainConfig partial = TrainConfigFromJson(nlohmann::json{{"epochs", 7}}, cat);
  CHECK(partial.epochs == 7);
  CHECK(partial.lr == cat.lr);
}

TEST_CASE("separable bands are learned completely") {
  const Dataset data = Bands(40, 1);
  const FitResult r = fit(SmallMlp(), data, FastConfig());
  REQUIRE_FALSE(r.history.empty());
  CHECK(r.history.size() <= 100);
  const Dataset train = data.Subset(r.train_indices);
  const Inference inf = run_model(r.model, train.inputs, false);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < train.size(); ++i) correct += inf.probabilities[i].argmax() == train.labels[i];
  CHECK(correct == train.size());
  CHECK(r.train_indices.size() + r.val_indices.size() == data.size());
  CHECK(r.val_indices.size() == 16);
}

TEST_CASE("early stopping keeps the best epoch") {
  const Dataset data = Bands(30, 2, 3);
  TrainConfig cfg = FastConfig();
  cfg.epochs = 40;
  cfg.patience = 3;
  cfg.lr = 3e-2;  // noisy on purpose
  std::vector<EpochRecord> seen;
  const FitResult r = fit(SmallMlp(3), data, cfg, [&](const EpochRecord& e) { seen.push_back(e); });
  CHECK(seen.size() == r.history.size());
  double best = INFINITY;
  int best_epoch = 0;
  for (const auto& e : r.history) {
    if (e.val_loss < best) {
      best = e.val_loss;
      best_epoch = e.epoch;
    }
  }
  CHECK(r.best_epoch == best_epoch);
  CHECK(r.best_val_loss == best);
  // Stops once patience runs out, unless the epoch budget ends first.
  if (static_cast<int>(r.history.size()) < cfg.epochs) {
    CHECK(static_cast<int>(r.history.size()) == r.best_epoch + cfg.patience);
  }
  // The returned weights reproduce the recorded best validation loss.
  const Dataset val = data.Subset(r.val_indices);
  const Inference inf = run_model(r.model, val.inputs, false);
  double loss = 0;
  for (std::size_t i = 0; i < val.size(); ++i) {
    const double p = inf.probabilities[i].probs[static_cast<std::size_t>(val.labels[i])];
    loss += -std::log(std::max(p, 1e-12)) / static_cast<double>(val.size());
  }
  CHECK(loss == doctest::Approx(r.best_val_loss).epsilon(1e-4));
}

TEST_CASE("training is deterministic") {
  const Dataset data = Bands(20, 4);
  TrainConfig cfg = FastConfig();
  cfg.epochs = 5;
  cfg.patience = 5;
  const FitResult a = fit(SmallMlp(), data, cfg);
  const FitResult b = fit(SmallMlp(), data, cfg);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].train_loss == b.history[i].train_loss);
    CHECK(a.history[i].val_loss == b.history[i].val_loss);
    CHECK(a.history[i].val_acc == b.history[i].val_acc);
  }
  cfg.seed = 99;
  const FitResult c = fit(SmallMlp(), data, cfg);
  CHECK(c.history[0].train_loss != a.history[0].train_loss);
}

TEST_CASE("fit rejects bad data") {
  TrainConfig cfg = FastConfig();
  cfg.epochs = 1;
  cfg.patience = 1;
  Dataset data = Bands(10, 5);
  // Head has three classes but class 2 never appears.
  CHECK_THROWS_AS(fit(SmallMlp(3), data, cfg), DataError);
  data.labels[0] = 7;
  CHECK_THROWS_AS(fit(SmallMlp(), data, cfg), LabelError);
  data.labels[0] = -1;
  CHECK_THROWS_AS(fit(SmallMlp(), data, cfg), LabelError);
  cfg.patience = 0;
  CHECK_THROWS_AS(fit(SmallMlp(), Bands(10, 5), cfg), ConfigError);
}

TEST_CASE("epsilon sweep") {
  CHECK(default_epsilon_grid() == std::vector<double>{0, 0.5, 1, 2, 3, 3.3, 4});
  const Dataset data = Bands(15, 6);
  TrainConfig cfg = FastConfig();
  cfg.epochs = 3;
  cfg.patience = 3;
  cfg.loss = LossConfig::Defaults(LossKind::kPoly1Ce);
  const std::vector<double> one = {2.0};
  CHECK(sweep_epsilon(SmallMlp(), data, cfg, one).size() == 1);

  const std::vector<double> zero = {0.0};
  const auto rows = sweep_epsilon(SmallMlp(), data, cfg, zero);
  TrainConfig ce = cfg;
  ce.loss = LossConfig::Defaults(LossKind::kCe);
  const FitResult plain = fit(SmallMlp(), data, ce);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].epsilon == 0.0);
  CHECK(rows[0].val_loss == plain.best_val_loss);
  CHECK(rows[0].best_epoch == plain.best_epoch);

  cfg.loss = LossConfig::Defaults(LossKind::kCe);
  CHECK_THROWS_AS(sweep_epsilon(SmallMlp(), data, cfg, one), ConfigError);
}

TEST_CASE("history csv") {
  const std::vector<EpochRecord> h = {{1, 0.5, 0.25, 0.75}};
  const std::string csv = history_csv(h);
  CHECK(csv.rfind("epoch,train_loss,val_loss,val_acc\n", 0) == 0);
  CHECK(csv.find("1,") != std::string::npos);
}
