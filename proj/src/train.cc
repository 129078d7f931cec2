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


#include "catkit/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "catkit/errors.hpp"
#include "catkit/eval.hpp"
#include "catkit/parallel.hpp"

namespace catkit {

TrainConfig TrainConfig::Defaults(Arch arch) {
  TrainConfig c;
  c.arch = arch;
  switch (arch) {
    case Arch::kCat:
      break;
    case Arch::kCnn:
      c.optimizer = OptimizerKind::kAdam;
      c.lr = 1e-3;
      c.weight_decay = 0.0;
      break;
    case Arch::kMlp:
      c.epochs = 200;
      c.batch_size = 200;
      c.optimizer = OptimizerKind::kAdam;
      c.lr = 1e-4;
      c.weight_decay = 0.0;
      break;
  }
  return c;
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  if (patience > epochs) throw ConfigError("patience must not exceed epochs");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 0.5)) {
    throw ConfigError("validation fraction must lie in (0, 0.5)");
  }
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be >= 0");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw ConfigError("weight decay must be >= 0");
  }
  loss.Validate();
}

nlohmann::json ToJson(const TrainConfig& c) {
  return {{"arch", ToString(c.arch)},
          {"epochs", c.epochs},
          {"patience", c.patience},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"validation_fraction", c.validation_fraction},
          {"loss", ToString(c.loss.kind)},
          {"epsilon", c.loss.epsilon},
          {"gamma", c.loss.gamma},
          {"optimizer", ToString(c.optimizer)},
          {"lr", c.lr},
          {"weight_decay", c.weight_decay}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j, TrainConfig c) {
  try {
    if (j.contains("arch")) c.arch = ParseArch(j["arch"].get<std::string>());
    c.epochs = j.value("epochs", c.epochs);
    c.patience = j.value("patience", c.patience);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.seed = j.value("seed", c.seed);
    c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
    if (j.contains("loss")) c.loss.kind = ParseLossKind(j["loss"].get<std::string>());
    c.loss.epsilon = j.value("epsilon", c.loss.epsilon);
    c.loss.gamma = j.value("gamma", c.loss.gamma);
    if (j.contains("optimizer")) c.optimizer = ParseOptimizerKind(j["optimizer"].get<std::string>());
    c.lr = j.value("lr", c.lr);
    c.weight_decay = j.value("weight_decay", c.weight_decay);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed train config: ") + e.what());
  }
  return c;
}

namespace {

struct ValScore {
  double loss = 0.0;
  double acc = 0.0;
};

ValScore Score(const Model<float>& model, const Dataset& data, std::span<const std::size_t> idx,
               const LossConfig& loss) {
  std::vector<Spectrogram> inputs;
  inputs.reserve(idx.size());
  for (std::size_t i : idx) inputs.push_back(data.inputs[i]);
  const Inference inf = run_model(model, inputs, false);
  ValScore s;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const int y = data.labels[idx[j]];
    const auto& p = inf.probabilities[j];
    s.loss += sample_loss(p.probs[static_cast<std::size_t>(y)], loss);
    if (attribute_closed(p).label == y) s.acc += 1.0;
  }
  s.loss /= static_cast<double>(idx.size());
  s.acc /= static_cast<double>(idx.size());
  return s;
}

}  // namespace

FitResult fit(const ModelConfig& model_cfg, const Dataset& data, const TrainConfig& cfg,
              const EpochCallback& on_epoch) {
  cfg.Validate();
  Validate(model_cfg);
  tune_allocator();
  const int k = NumClasses(model_cfg);
  if (k < 2) throw ConfigError("need at least 2 classes");
  if (ArchOf(model_cfg) != cfg.arch) throw ConfigError("train arch does not match model config");
  for (int y : data.labels) {
    if (y < 0 || y >= k) throw LabelError("label " + std::to_string(y) + " outside [0, " + std::to_string(k) + ")");
  }

  const Rng root(cfg.seed);
  auto [train_idx, val_idx] = stratified_split(data.labels, cfg.validation_fraction, root.Fork(1)());
  std::vector<int> per_class(static_cast<std::size_t>(k), 0);
  for (std::size_t i : train_idx) ++per_class[static_cast<std::size_t>(data.labels[i])];
  for (int c = 0; c < k; ++c) {
    if (per_class[static_cast<std::size_t>(c)] == 0) {
      throw DataError("class " + std::to_string(c) + " has no training samples");
    }
  }
  if (val_idx.empty()) throw DataError("validation split is empty");

  Model<float> model = Model<float>::Create(model_cfg, root.Fork(2)());
  AdamHyper hyper;
  hyper.lr = cfg.lr;
  hyper.weight_decay = cfg.optimizer == OptimizerKind::kAdamW ? cfg.weight_decay : 0.0;
  Optimizer<float> opt(cfg.optimizer, hyper, model.params());
  Rng shuffle_rng = root.Fork(3);
  Rng drop_rng = root.Fork(4);

  FitResult result{model.Clone(), {}, 0, 0.0, train_idx, val_idx};
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  std::vector<std::size_t> order = train_idx;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double train_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const float inv = 1.0f / static_cast<float>(end - start);
      model.params().ZeroGrad();
      for (std::size_t j = start; j < end; ++j) {
        const std::size_t i = order[j];
        const ModelOutput<float> out = model.Forward(ToTensor<float>(data.inputs[i]), true, &drop_rng);
        const Tensor<float> loss = loss_on_logits(out.logits, data.labels[i], cfg.loss);
        train_loss += loss.item();
        backward(scale(loss, inv));
      }
      opt.Step(model.params());
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = train_loss / static_cast<double>(order.size());
    const ValScore vs = Score(model, data, val_idx, cfg.loss);
    rec.val_loss = vs.loss;
    rec.val_acc = vs.acc;
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (rec.val_loss < best) {
      best = rec.val_loss;
      since_best = 0;
      result.model = model.Clone();
      result.best_epoch = epoch;
      result.best_val_loss = best;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

std::string history_csv(std::span<const EpochRecord> history) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,train_loss,val_loss,val_acc\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << r.train_loss << ',' << r.val_loss << ',' << r.val_acc << '\n';
  }
  return out.str();
}

std::vector<double> default_epsilon_grid() { return {0.0, 0.5, 1.0, 2.0, 3.0, 3.3, 4.0}; }

std::vector<SweepRow> sweep_epsilon(const ModelConfig& model_cfg, const Dataset& data,
                                    const TrainConfig& base, std::span<const double> epsilons,
                                    const EpochCallback& on_epoch) {
  if (epsilons.empty()) throw ConfigError("epsilon list is empty");
  if (base.loss.kind != LossKind::kPoly1Ce && base.loss.kind != LossKind::kPoly1Fl) {
    throw ConfigError("epsilon sweep needs a poly-1 loss");
  }
  std::vector<SweepRow> rows;
  for (double eps : epsilons) {
    TrainConfig cfg = base;
    cfg.loss.epsilon = eps;
    const FitResult r = fit(model_cfg, data, cfg, on_epoch);
    const EpochRecord& best = r.history[static_cast<std::size_t>(r.best_epoch - 1)];
    rows.push_back({eps, best.val_acc, best.val_loss, r.best_epoch});
  }
  return rows;
}

}  // namespace catkit
