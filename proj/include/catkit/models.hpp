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

#ifndef CATKIT_MODELS_HPP_
#define CATKIT_MODELS_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "catkit/dsp.hpp"
#include "catkit/rng.hpp"
#include "catkit/tensor.hpp"
#include "json.hpp"

namespace catkit {

// Compact attribution transformer. The second conv width must equal
// embed_dim: the tokenizer's last feature map is read directly as tokens.
struct CatConfig {
  int input_size = kSpectrogramSize;
  std::array<int, 2> conv_channels{64, 128};
  int embed_dim = 128;
  int num_layers = 2;
  int num_heads = 2;
  double mlp_ratio = 2.0;
  double drop_path_rate = 0.1;
  double dropout = 0.1;
  int num_classes = 8;

  void Validate() const;
  int num_tokens() const { return (input_size / 4) * (input_size / 4); }
  int mlp_hidden() const;
};

struct CnnConfig {
  int input_size = kSpectrogramSize;
  std::array<int, 2> conv_channels{16, 32};
  int hidden = 128;
  double conv_dropout = 0.25;
  double dense_dropout = 0.5;
  int num_classes = 8;

  void Validate() const;
};

struct MlpConfig {
  int input_size = kSpectrogramSize;
  std::array<int, 2> hidden{1500, 1500};
  int num_classes = 8;

  void Validate() const;
};

enum class Arch { kCat, kCnn, kMlp };

Arch ParseArch(const std::string& s);  // cat | cnn | mlp
std::string ToString(Arch arch);

using ModelConfig = std::variant<CatConfig, CnnConfig, MlpConfig>;

Arch ArchOf(const ModelConfig& cfg);
int NumClasses(const ModelConfig& cfg);
int InputSize(const ModelConfig& cfg);
void SetNumClasses(ModelConfig& cfg, int num_classes);
void Validate(const ModelConfig& cfg);
ModelConfig DefaultConfig(Arch arch);

nlohmann::json ToJson(const ModelConfig& cfg);
ModelConfig ModelConfigFromJson(const nlohmann::json& j);

// Exact trainable-scalar counts, computed from the config alone.
std::size_t param_count(const CatConfig& cfg);
std::size_t param_count(const CnnConfig& cfg);
std::size_t param_count(const MlpConfig& cfg);
std::size_t param_count(const ModelConfig& cfg);

// Named trainable leaves in creation order.
template <typename T>
class ParameterStore {
 public:
  Tensor<T>& Add(const std::string& name, Shape shape, std::vector<T> values);
  const Tensor<T>& Get(const std::string& name) const;
  Tensor<T>& Get(const std::string& name);
  bool Contains(const std::string& name) const;

  std::vector<std::pair<std::string, Tensor<T>>>& entries() { return entries_; }
  const std::vector<std::pair<std::string, Tensor<T>>>& entries() const { return entries_; }

  std::size_t ScalarCount() const;
  void ZeroGrad();
  // Deep copy; the copy's leaves are independent of this store.
  ParameterStore Clone() const;

 private:
  std::vector<std::pair<std::string, Tensor<T>>> entries_;
};

template <typename T>
struct ModelOutput {
  Tensor<T> logits;
  Tensor<T> probabilities;
  // Input to the final dense layer.
  Tensor<T> latent;
};

// Inputs are [input_size, input_size] grids (rows = frequency). `rng` is only
// read when training with nonzero drop rates.
template <typename T>
ModelOutput<T> cat_forward(const Tensor<T>& input, const CatConfig& cfg,
                           const ParameterStore<T>& params, bool training, Rng* rng);
template <typename T>
ModelOutput<T> cnn_forward(const Tensor<T>& input, const CnnConfig& cfg,
                           const ParameterStore<T>& params, bool training, Rng* rng);
// Accepts either the flattened [input_size^2] vector or the 2-D grid.
template <typename T>
ModelOutput<T> mlp_forward(const Tensor<T>& input, const MlpConfig& cfg,
                           const ParameterStore<T>& params, bool training, Rng* rng);

template <typename T>
ParameterStore<T> init_parameters(const ModelConfig& cfg, Rng& rng);

template <typename T>
class Model {
 public:
  Model(ModelConfig cfg, ParameterStore<T> params);
  static Model Create(const ModelConfig& cfg, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ParameterStore<T>& params() { return params_; }
  const ParameterStore<T>& params() const { return params_; }

  ModelOutput<T> Forward(const Tensor<T>& input, bool training = false, Rng* rng = nullptr) const;
  ModelOutput<T> Forward(const Spectrogram& s) const;

  Model Clone() const { return Model(config_, params_.Clone()); }

 private:
  ModelConfig config_;
  ParameterStore<T> params_;
};

template <typename T>
Tensor<T> ToTensor(const Spectrogram& s);

}  // namespace catkit

#endif  // CATKIT_MODELS_HPP_
