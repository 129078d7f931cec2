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


#include <cmath>
#include <cstdlib>
#include <vector>

#include "catkit/errors.hpp"
#include "catkit/eval.hpp"
#include "catkit/models.hpp"
#include "doctest.h"

using namespace catkit;

namespace {

ProbabilitySet Probs(std::vector<double> p) { return ProbabilitySet{std::move(p)}; }

// Per-class scores recomputed straight from label lists.
struct Oracle {
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
};

Oracle ScoreLists(const std::vector<int>& pred, const std::vector<int>& truth, int k) {
  Oracle o;
  const double n = static_cast<double>(truth.size());
  for (int c = 0; c < k; ++c) {
    double tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      tp += (pred[i] == c && truth[i] == c);
      predicted += (pred[i] == c);
      actual += (truth[i] == c);
    }
    const double p = predicted > 0 ? tp / predicted : 0.0;
    const double r = actual > 0 ? tp / actual : 0.0;
    const double f = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
    o.precision += actual / n * p;
    o.recall += actual / n * r;
    o.f1 += actual / n * f;
    o.accuracy += tp / n;
  }
  return o;
}

}  // namespace

TEST_CASE("closed-set attribution picks the argmax") {
  const Decision d = attribute_closed(Probs({0.1, 0.7, 0.2}));
  CHECK(d.label == 1);
  CHECK(d.confidence == doctest::Approx(0.7));
  CHECK(attribute_closed(Probs({0.4, 0.4, 0.2})).label == 0);
  CHECK_THROWS_AS(attribute_closed(Probs({0.5, 0.6})), InvalidArgument);
  CHECK_THROWS_AS(attribute_closed(Probs({1.2, -0.2})), InvalidArgument);
  CHECK_THROWS_AS(attribute_closed(Probs({})), InvalidArgument);
}

TEST_CASE("open-set attribution thresholds strictly") {
  const auto p = Probs({0.1, 0.7, 0.2});
  CHECK(attribute_open(p, 0.5).label == 1);
  CHECK(attribute_open(p, 0.8).unknown());
  CHECK(attribute_open(Probs({0.5, 0.5}), 0.5).unknown());
  CHECK(attribute_open(Probs({0.25, 0.75}), 0.75).unknown());
  CHECK_THROWS_AS(attribute_open(p, 0.0), ConfigError);
  CHECK_THROWS_AS(attribute_open(p, 1.0), ConfigError);
}

TEST_CASE("raising the threshold only moves decisions to U") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(4);
    double s = 0;
    for (double& x : v) s += (x = rng.Uniform() + 1e-3);
    for (double& x : v) x /= s;
    const auto p = Probs(v);
    const double t1 = 0.01 + 0.98 * rng.Uniform();
    const double t2 = t1 + (0.99 - t1) * rng.Uniform();
    const Decision lo = attribute_open(p, t1), hi = attribute_open(p, t2);
    if (!hi.unknown()) CHECK(lo.label == hi.label);
    if (lo.unknown()) CHECK(hi.unknown());
    if (!lo.unknown()) CHECK(lo.label == attribute_closed(p).label);
  }
}

TEST_CASE("confusion matrices recount the decisions") {
  const std::vector<Decision> d = {{0, 0.9}, {1, 0.8}, {kUnknown, 0.3}, {0, 0.6}, {kUnknown, 0.2}};
  const std::vector<int> truth = {0, 0, 1, kUnknown, kUnknown};
  const ConfusionMatrix cm = confusion(d, truth, 2, true);
  CHECK(cm.k == 3);
  CHECK(cm.total() == 5);
  CHECK(cm.at(0, 0) == 1);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(1, 2) == 1);
  CHECK(cm.at(2, 0) == 1);
  CHECK(cm.at(2, 2) == 1);
  CHECK(cm.support(0) == 2);
  CHECK_THROWS_AS(confusion(d, truth, 2, false), LabelError);
  CHECK_THROWS_AS(confusion(std::span<const Decision>(d).first(2), truth, 2, true), ShapeError);
  const std::vector<int> bad = {0, 3};
  const std::vector<int> ok = {0, 1};
  CHECK_THROWS_AS(confusion(bad, ok, 2), LabelError);
}

TEST_CASE("weighted metrics example") {
  ConfusionMatrix cm(2);
  cm.at(0, 0) = 8;
  cm.at(0, 1) = 2;
  cm.at(1, 0) = 3;
  cm.at(1, 1) = 7;
  const Metrics m = weighted_metrics(cm);
  CHECK(m.accuracy == doctest::Approx(0.75));
  CHECK(m.recall == doctest::Approx(0.75));
  CHECK(m.precision == doctest::Approx(0.5 * (8.0 / 11.0 + 7.0 / 9.0)));
  CHECK(m.precision == doctest::Approx(0.7527).epsilon(1e-4));
  CHECK(m.f1 == doctest::Approx(0.7494).epsilon(1e-4));
  CHECK(m.support == std::vector<std::int64_t>{10, 10});
}

TEST_CASE("zero denominators score zero") {
  ConfusionMatrix cm(3);
  cm.at(0, 0) = 5;
  cm.at(1, 0) = 5;  // class 1 never predicted, class 2 absent
  const Metrics m = weighted_metrics(cm);
  CHECK(m.class_precision[1] == 0.0);
  CHECK(m.class_precision[2] == 0.0);
  CHECK(m.class_f1[1] == 0.0);
  CHECK(std::isfinite(m.f1));
  CHECK_THROWS_AS(weighted_metrics(ConfusionMatrix(3)), DataError);
}

TEST_CASE("weighted metrics agree with a per-list recount") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + static_cast<int>(rng.Below(7));
    const std::size_t n = 1 + rng.Below(300);
    std::vector<int> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(rng.Below(k));
      pred[i] = rng.Uniform() < 0.6 ? truth[i] : static_cast<int>(rng.Below(k));
    }
    const Metrics m = weighted_metrics(confusion(pred, truth, k));
    const Oracle o = ScoreLists(pred, truth, k);
    CHECK(m.accuracy == doctest::Approx(o.accuracy).epsilon(1e-12));
    CHECK(m.precision == doctest::Approx(o.precision).epsilon(1e-12));
    CHECK(m.recall == doctest::Approx(o.recall).epsilon(1e-12));
    CHECK(m.f1 == doctest::Approx(o.f1).epsilon(1e-12));
    // Weighted recall is accuracy.
    CHECK(std::abs(m.recall - m.accuracy) < 1e-12);
    for (double v : {m.precision, m.recall, m.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("constant baselines on the reference class counts") {
  // Known: FastPitch, FastSpeech2, Glow-TTS, gTTS, Tacotron, Tacotron 2,
  // TalkNet, Riva. Unknown test: Mixer-TTS, SpeedySpeech, VITS.
  const std::vector<std::int64_t> train = {1000, 500, 1000, 1000, 1000, 500, 1000, 1000};
  const std::vector<int> test_counts = {1500, 300, 1500, 1500, 1500, 300, 1500, 1000};
  std::vector<int> closed;
  for (int c = 0; c < 8; ++c) closed.insert(closed.end(), test_counts[c], c);
  REQUIRE(closed.size() == 9100);
  std::vector<int> open = closed;
  open.insert(open.end(), 900, kUnknown);

  CHECK(std::abs(baseline_constant(BaselineKind::kMajority, train, closed).accuracy - 0.1648) < 1e-4);
  CHECK(std::abs(baseline_constant(BaselineKind::kMinority, train, closed).accuracy - 0.0330) < 1e-4);
  CHECK(std::abs(baseline_constant(BaselineKind::kMajority, train, open).accuracy - 0.1500) < 1e-4);
  CHECK(std::abs(baseline_constant(BaselineKind::kMinority, train, open).accuracy - 0.0300) < 1e-4);
  const Metrics maj = baseline_constant(BaselineKind::kMajority, train, closed);
  CHECK(maj.recall == doctest::Approx(maj.accuracy));
  CHECK_THROWS_AS(baseline_constant(BaselineKind::kMajority, std::vector<std::int64_t>{}, closed), InvalidArgument);
}

TEST_CASE("threshold tuning follows the validation quantile") {
  std::vector<ProbabilitySet> v;
  for (int i = 1; i <= 100; ++i) {
    const double p = 0.5 + 0.004 * i;  // 0.504 .. 0.9
    v.push_back(Probs({p, 1.0 - p}));
  }
  const double t = tune_threshold(v, 0.1);
  int rejected = 0;
  for (const auto& p : v) rejected += attribute_open(p, t).unknown();
  CHECK(rejected >= 9);
  CHECK(rejected <= 11);
  // Clamped from below by 1/N and from above by 0.999.
  const std::vector<ProbabilitySet> flat(5, Probs({0.5, 0.5}));
  CHECK(tune_threshold(flat, 0.5) >= 0.5);
  const std::vector<ProbabilitySet> sure(5, Probs({1.0, 0.0}));
  CHECK(tune_threshold(sure, 0.5) <= 0.999);
  CHECK_THROWS_AS(tune_threshold({}, 0.1), DataError);
  CHECK_THROWS_AS(tune_threshold(v, 1.5), ConfigError);
}

TEST_CASE("batched inference matches single forwards at any thread count") {
  CatConfig c;
  c.conv_channels = {4, 8};
  c.embed_dim = 8;
  c.num_classes = 3;
  const auto model = Model<float>::Create(c, 2);
  Rng rng(9);
  std::vector<Spectrogram> inputs(7);
  for (auto& s : inputs) {
    for (float& v : s.pixels) v = static_cast<float>(rng.Uniform());
  }
  setenv("CATKIT_THREADS", "1", 1);
  const Inference one = run_model(model, inputs, true);
  setenv("CATKIT_THREADS", "3", 1);
  const Inference three = run_model(model, inputs, false);
  unsetenv("CATKIT_THREADS");
  REQUIRE(one.probabilities.size() == 7);
  REQUIRE(one.latents.size() == 7);
  CHECK(three.latents.empty());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    CHECK(one.probabilities[i].probs == three.probabilities[i].probs);
    const auto direct = model.Forward(inputs[i]);
    CHECK(one.probabilities[i].probs[0] == doctest::Approx(direct.probabilities.at(0)));
    CHECK(one.latents[i].size() == 8);
    CHECK(one.latents[i][0] == direct.latent.at(0));
  }
}

TEST_CASE("reports serialize") {
  ConfusionMatrix cm(2);
  cm.at(0, 0) = 3;
  cm.at(1, 0) = 1;
  const auto j = ToJson(weighted_metrics(cm));
  CHECK(j["accuracy"].get<double>() == doctest::Approx(0.75));
  CHECK(ToJson(cm).size() == 2);
  CHECK(ToJson(cm)[1][0] == 1);
}
