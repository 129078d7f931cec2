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


#ifndef CATKIT_TRAIN_HPP_
#define CATKIT_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "catkit/data.hpp"
#include "catkit/losses.hpp"
#include "catkit/models.hpp"
#include "catkit/optim.hpp"
#include "json.hpp"

namespace catkit {

struct TrainConfig {
  Arch arch = Arch::kCat;
  int epochs = 100;
  int patience = 10;
  int batch_size = 128;
  std::uint64_t seed = 0;
  double validation_fraction = 0.1;
  LossConfig loss;
  OptimizerKind optimizer = OptimizerKind::kAdamW;
  double lr = 1e-4;
  double weight_decay = 1e-4;

  // CAT: AdamW lr = wd = 1e-4. CNN: Adam lr 1e-3. MLP: Adam lr 1e-4, 200
  // epochs, batch 200. All: patience 10.
  static TrainConfig Defaults(Arch arch);
  void Validate() const;
};

nlohmann::json ToJson(const TrainConfig& c);
// Missing keys keep the values already in `base`.
TrainConfig TrainConfigFromJson(const nlohmann::json& j, TrainConfig base);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct FitResult {
  Model<float> model;  // best-validation weights
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// `data` holds known-class samples only (labels in [0, num_classes)).
FitResult fit(const ModelConfig& model_cfg, const Dataset& data, const TrainConfig& cfg,
              const EpochCallback& on_epoch = {});

std::string history_csv(std::span<const EpochRecord> history);

struct SweepRow {
  double epsilon = 0.0;
  double val_acc = 0.0;
  double val_loss = 0.0;
  int best_epoch = 0;
};

std::vector<double> default_epsilon_grid();  // {0, 0.5, 1, 2, 3, 3.3, 4}

// One fit per epsilon with the same seed and split.
std::vector<SweepRow> sweep_epsilon(const ModelConfig& model_cfg, const Dataset& data,
                                    const TrainConfig& base, std::span<const double> epsilons,
                                    const EpochCallback& on_epoch = {});

}  // namespace catkit

#endif  // CATKIT_TRAIN_HPP_
