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

#include "catkit/models.hpp"

#include <algorithm>
#include <cmath>

#include "catkit/errors.hpp"

namespace catkit {

// -- configs ------------------------------------------------------------------

namespace {

void RequireRate(double r, const char* name) {
  if (!(r >= 0.0 && r < 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1)");
}

void RequireInputSize(int input_size) {
  if (input_size < 4 || input_size % 4 != 0) {
    throw ConfigError("input size must be a positive multiple of 4");
  }
}

void RequireClasses(int n) {
  if (n < 2) throw ConfigError("need at least 2 classes");
}

}  // namespace

int CatConfig::mlp_hidden() const {
  return static_cast<int>(std::lround(mlp_ratio * embed_dim));
}

void CatConfig::Validate() const {
  RequireInputSize(input_size);
  if (conv_channels[0] < 1 || conv_channels[1] < 1) throw ConfigError("conv channels must be >= 1");
  if (conv_channels[1] != embed_dim) {
    throw ConfigError("second conv width must equal embed_dim");
  }
  if (num_heads < 1 || embed_dim % num_heads != 0) {
    throw ConfigError("embed_dim " + std::to_string(embed_dim) + " not divisible by " +
                      std::to_string(num_heads) + " heads");
  }
  if (num_layers < 1) throw ConfigError("num_layers must be >= 1");
  if (!(mlp_ratio > 0.0) || mlp_hidden() < 1) throw ConfigError("mlp_ratio must be positive");
  RequireRate(drop_path_rate, "drop_path_rate");
  RequireRate(dropout, "dropout");
  RequireClasses(num_classes);
}

void CnnConfig::Validate() const {
  RequireInputSize(input_size);
  if (conv_channels[0] < 1 || conv_channels[1] < 1 || hidden < 1) {
    throw ConfigError("CNN widths must be >= 1");
  }
  RequireRate(conv_dropout, "conv_dropout");
  RequireRate(dense_dropout, "dense_dropout");
  RequireClasses(num_classes);
}

void MlpConfig::Validate() const {
  if (input_size < 1) throw ConfigError("input size must be >= 1");
  if (hidden[0] < 1 || hidden[1] < 1) throw ConfigError("MLP widths must be >= 1");
  RequireClasses(num_classes);
}

Arch ParseArch(const std::string& s) {
  if (s == "cat") return Arch::kCat;
  if (s == "cnn") return Arch::kCnn;
  if (s == "mlp") return Arch::kMlp;
  throw ConfigError("unknown architecture '" + s + "' (expected cat|cnn|mlp)");
}

std::string ToString(Arch arch) {
  switch (arch) {
    case Arch::kCat:
      return "cat";
    case Arch::kCnn:
      return "cnn";
    case Arch::kMlp:
      return "mlp";
  }
  return "cat";
}

Arch ArchOf(const ModelConfig& cfg) { return static_cast<Arch>(cfg.index()); }

int NumClasses(const ModelConfig& cfg) {
  return std::visit([](const auto& c) { return c.num_classes; }, cfg);
}

int InputSize(const ModelConfig& cfg) {
  return std::visit([](const auto& c) { return c.input_size; }, cfg);
}

void SetNumClasses(ModelConfig& cfg, int num_classes) {
  std::visit([num_classes](auto& c) { c.num_classes = num_classes; }, cfg);
}

void Validate(const ModelConfig& cfg) {
  std::visit([](const auto& c) { c.Validate(); }, cfg);
}

ModelConfig DefaultConfig(Arch arch) {
  switch (arch) {
    case Arch::kCat:
      return CatConfig{};
    case Arch::kCnn:
      return CnnConfig{};
    case Arch::kMlp:
      return MlpConfig{};
  }
  return CatConfig{};
}

nlohmann::json ToJson(const ModelConfig& cfg) {
  nlohmann::json j;
  j["arch"] = ToString(ArchOf(cfg));
  if (const auto* c = std::get_if<CatConfig>(&cfg)) {
    j["input_size"] = c->input_size;
    j["conv_channels"] = {c->conv_channels[0], c->conv_channels[1]};
    j["embed_dim"] = c->embed_dim;
    j["num_layers"] = c->num_layers;
    j["num_heads"] = c->num_heads;
    j["mlp_ratio"] = c->mlp_ratio;
    j["drop_path_rate"] = c->drop_path_rate;
    j["dropout"] = c->dropout;
    j["num_classes"] = c->num_classes;
  } else if (const auto* c = std::get_if<CnnConfig>(&cfg)) {
    j["input_size"] = c->input_size;
    j["conv_channels"] = {c->conv_channels[0], c->conv_channels[1]};
    j["hidden"] = c->hidden;
    j["conv_dropout"] = c->conv_dropout;
    j["dense_dropout"] = c->dense_dropout;
    j["num_classes"] = c->num_classes;
  } else if (const auto* c = std::get_if<MlpConfig>(&cfg)) {
    j["input_size"] = c->input_size;
    j["hidden"] = {c->hidden[0], c->hidden[1]};
    j["num_classes"] = c->num_classes;
  }
  return j;
}

ModelConfig ModelConfigFromJson(const nlohmann::json& j) {
  try {
    const Arch arch = ParseArch(j.at("arch").get<std::string>());
    ModelConfig out = DefaultConfig(arch);
    if (auto* c = std::get_if<CatConfig>(&out)) {
      c->input_size = j.value("input_size", c->input_size);
      if (j.contains("conv_channels")) c->conv_channels = j["conv_channels"].get<std::array<int, 2>>();
      c->embed_dim = j.value("embed_dim", c->embed_dim);
      c->num_layers = j.value("num_layers", c->num_layers);
      c->num_heads = j.value("num_heads", c->num_heads);
      c->mlp_ratio = j.value("mlp_ratio", c->mlp_ratio);
      c->drop_path_rate = j.value("drop_path_rate", c->drop_path_rate);
      c->dropout = j.value("dropout", c->dropout);
      c->num_classes = j.value("num_classes", c->num_classes);
    } else if (auto* c = std::get_if<CnnConfig>(&out)) {
      c->input_size = j.value("input_size", c->input_size);
      if (j.contains("conv_channels")) c->conv_channels = j["conv_channels"].get<std::array<int, 2>>();
      c->hidden = j.value("hidden", c->hidden);
      c->conv_dropout = j.value("conv_dropout", c->conv_dropout);
      c->dense_dropout = j.value("dense_dropout", c->dense_dropout);
      c->num_classes = j.value("num_classes", c->num_classes);
    } else if (auto* c = std::get_if<MlpConfig>(&out)) {
      c->input_size = j.value("input_size", c->input_size);
      if (j.contains("hidden")) c->hidden = j["hidden"].get<std::array<int, 2>>();
      c->num_classes = j.value("num_classes", c->num_classes);
    }
    Validate(out);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed model config: ") + e.what());
  }
}

// -- parameter counts -------------------------------------------------------------

std::size_t param_count(const CatConfig& c) {
  c.Validate();
  const std::size_t c0 = c.conv_channels[0], c1 = c.conv_channels[1];
  const std::size_t e = c.embed_dim, h = c.mlp_hidden(), n = c.num_classes;
  const std::size_t tokenizer = (c0 * 9 + c0) + (c1 * c0 * 9 + c1);
  const std::size_t positional = static_cast<std::size_t>(c.num_tokens()) * e;
  const std::size_t block = 2 * e                // norm1
                            + 4 * (e * e + e)    // q, k, v, out projections
                            + 2 * e              // norm2
                            + (e * h + h)        // mlp expand
                            + (h * e + e);       // mlp contract
  const std::size_t tail = 2 * e   // final norm
                           + e     // pooling vector
                           + e * n + n;
  return tokenizer + positional + c.num_layers * block + tail;
}

std::size_t param_count(const CnnConfig& c) {
  c.Validate();
  const std::size_t c0 = c.conv_channels[0], c1 = c.conv_channels[1];
  const std::size_t flat = c1 * (c.input_size / 4) * (c.input_size / 4);
  return (c0 * 9 + c0) + (c1 * c0 * 9 + c1) + (flat * c.hidden + c.hidden) +
         (static_cast<std::size_t>(c.hidden) * c.num_classes + c.num_classes);
}

std::size_t param_count(const MlpConfig& c) {
  c.Validate();
  const std::size_t in = static_cast<std::size_t>(c.input_size) * c.input_size;
  const std::size_t h0 = c.hidden[0], h1 = c.hidden[1];
  return (in * h0 + h0) + (h0 * h1 + h1) + (h1 * c.num_classes + c.num_classes);
}

std::size_t param_count(const ModelConfig& cfg) {
  return std::visit([](const auto& c) { return param_count(c); }, cfg);
}

// -- parameter store ------------------------------------------------------------------

template <typename T>
Tensor<T>& ParameterStore<T>::Add(const std::string& name, Shape shape, std::vector<T> values) {
  if (Contains(name)) throw InvalidArgument("duplicate parameter " + name);
  entries_.emplace_back(name, Tensor<T>::Leaf(std::move(shape), std::move(values), true));
  return entries_.back().second;
}

template <typename T>
const Tensor<T>& ParameterStore<T>::Get(const std::string& name) const {
  for (const auto& [n, t] : entries_) {
    if (n == name) return t;
  }
  throw InvalidArgument("no parameter named " + name);
}

template <typename T>
Tensor<T>& ParameterStore<T>::Get(const std::string& name) {
  return const_cast<Tensor<T>&>(std::as_const(*this).Get(name));
}

template <typename T>
bool ParameterStore<T>::Contains(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == name; });
}

template <typename T>
std::size_t ParameterStore<T>::ScalarCount() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.second.size();
  return n;
}

template <typename T>
void ParameterStore<T>::ZeroGrad() {
  for (auto& e : entries_) e.second.ZeroGrad();
}

template <typename T>
ParameterStore<T> ParameterStore<T>::Clone() const {
  ParameterStore out;
  for (const auto& [name, t] : entries_) {
    out.Add(name, t.shape(), std::vector<T>(t.data().begin(), t.data().end()));
  }
  return out;
}

// -- initialization -----------------------------------------------------------------

namespace {

template <typename T>
std::vector<T> TruncNormal(std::size_t n, double stddev, Rng& rng) {
  std::vector<T> v(n);
  for (T& x : v) {
    double z;
    do {
      z = rng.Normal();
    } while (std::abs(z) > 2.0);
    x = static_cast<T>(z * stddev);
  }
  return v;
}

template <typename T>
std::vector<T> Normal(std::size_t n, double stddev, Rng& rng) {
  std::vector<T> v(n);
  for (T& x : v) x = static_cast<T>(rng.Normal() * stddev);
  return v;
}

template <typename T>
std::vector<T> GlorotUniform(std::size_t n, double fan_in, double fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::vector<T> v(n);
  for (T& x : v) x = static_cast<T>((2.0 * rng.Uniform() - 1.0) * limit);
  return v;
}

template <typename T>
void AddZeros(ParameterStore<T>& p, const std::string& name, Shape shape) {
  p.Add(name, shape, std::vector<T>(NumElements(shape), T(0)));
}

template <typename T>
void AddOnes(ParameterStore<T>& p, const std::string& name, Shape shape) {
  p.Add(name, shape, std::vector<T>(NumElements(shape), T(1)));
}

template <typename T>
void InitCat(const CatConfig& c, ParameterStore<T>& p, Rng& rng) {
  const int c0 = c.conv_channels[0], c1 = c.conv_channels[1];
  const int e = c.embed_dim, h = c.mlp_hidden();
  constexpr double kLinearStd = 0.02;
  // Kaiming-normal convs.
  p.Add("conv1.weight", {c0, 1, 3, 3}, Normal<T>(c0 * 9, std::sqrt(2.0 / 9.0), rng));
  AddZeros(p, "conv1.bias", {c0});
  p.Add("conv2.weight", {c1, c0, 3, 3},
        Normal<T>(static_cast<std::size_t>(c1) * c0 * 9, std::sqrt(2.0 / (c0 * 9.0)), rng));
  AddZeros(p, "conv2.bias", {c1});
  p.Add("pos_embedding", {c.num_tokens(), e},
        TruncNormal<T>(static_cast<std::size_t>(c.num_tokens()) * e, 0.2, rng));
  for (int l = 0; l < c.num_layers; ++l) {
    const std::string b = "blocks." + std::to_string(l) + ".";
    AddOnes(p, b + "norm1.gain", {e});
    AddZeros(p, b + "norm1.bias", {e});
    for (const char* proj : {"attn.wq", "attn.wk", "attn.wv", "attn.wo"}) {
      p.Add(b + proj, {e, e}, TruncNormal<T>(static_cast<std::size_t>(e) * e, kLinearStd, rng));
      std::string bias = b + proj;
      bias.replace(bias.size() - 2, 1, "b");
      AddZeros(p, bias, {e});
    }
    AddOnes(p, b + "norm2.gain", {e});
    AddZeros(p, b + "norm2.bias", {e});
    p.Add(b + "mlp.fc1.weight", {e, h},
          TruncNormal<T>(static_cast<std::size_t>(e) * h, kLinearStd, rng));
    AddZeros(p, b + "mlp.fc1.bias", {h});
    p.Add(b + "mlp.fc2.weight", {h, e},
          TruncNormal<T>(static_cast<std::size_t>(h) * e, kLinearStd, rng));
    AddZeros(p, b + "mlp.fc2.bias", {e});
  }
  AddOnes(p, "norm.gain", {e});
  AddZeros(p, "norm.bias", {e});
  p.Add("pool.u", {e, 1}, TruncNormal<T>(e, kLinearStd, rng));
  p.Add("head.weight", {e, c.num_classes},
        TruncNormal<T>(static_cast<std::size_t>(e) * c.num_classes, kLinearStd, rng));
  AddZeros(p, "head.bias", {c.num_classes});
}

template <typename T>
void InitCnn(const CnnConfig& c, ParameterStore<T>& p, Rng& rng) {
  const int c0 = c.conv_channels[0], c1 = c.conv_channels[1];
  const int flat = c1 * (c.input_size / 4) * (c.input_size / 4);
  p.Add("conv1.weight", {c0, 1, 3, 3}, GlorotUniform<T>(c0 * 9, 9, c0 * 9.0, rng));
  AddZeros(p, "conv1.bias", {c0});
  p.Add("conv2.weight", {c1, c0, 3, 3},
        GlorotUniform<T>(static_cast<std::size_t>(c1) * c0 * 9, c0 * 9.0, c1 * 9.0, rng));
  AddZeros(p, "conv2.bias", {c1});
  p.Add("fc1.weight", {flat, c.hidden},
        GlorotUniform<T>(static_cast<std::size_t>(flat) * c.hidden, flat, c.hidden, rng));
  AddZeros(p, "fc1.bias", {c.hidden});
  p.Add("head.weight", {c.hidden, c.num_classes},
        GlorotUniform<T>(static_cast<std::size_t>(c.hidden) * c.num_classes, c.hidden,
                         c.num_classes, rng));
  AddZeros(p, "head.bias", {c.num_classes});
}

template <typename T>
void InitMlp(const MlpConfig& c, ParameterStore<T>& p, Rng& rng) {
  const int in = c.input_size * c.input_size;
  const int h0 = c.hidden[0], h1 = c.hidden[1];
  p.Add("fc1.weight", {in, h0}, GlorotUniform<T>(static_cast<std::size_t>(in) * h0, in, h0, rng));
  AddZeros(p, "fc1.bias", {h0});
  p.Add("fc2.weight", {h0, h1}, GlorotUniform<T>(static_cast<std::size_t>(h0) * h1, h0, h1, rng));
  AddZeros(p, "fc2.bias", {h1});
  p.Add("head.weight", {h1, c.num_classes},
        GlorotUniform<T>(static_cast<std::size_t>(h1) * c.num_classes, h1, c.num_classes, rng));
  AddZeros(p, "head.bias", {c.num_classes});
}

}  // namespace

template <typename T>
ParameterStore<T> init_parameters(const ModelConfig& cfg, Rng& rng) {
  Validate(cfg);
  ParameterStore<T> p;
  std::visit(
      [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, CatConfig>) {
          InitCat(c, p, rng);
        } else if constexpr (std::is_same_v<C, CnnConfig>) {
          InitCnn(c, p, rng);
        } else {
          InitMlp(c, p, rng);
        }
      },
      cfg);
  return p;
}

// -- forward passes ---------------------------------------------------------------

namespace {

template <typename T>
void RequireGrid(const Tensor<T>& input, int size) {
  const bool ok = (input.rank() == 2 && input.dim(0) == size && input.dim(1) == size) ||
                  (input.rank() == 3 && input.dim(0) == 1 && input.dim(1) == size &&
                   input.dim(2) == size);
  if (!ok) {
    throw ShapeError("model expects a " + std::to_string(size) + "x" + std::to_string(size) +
                     " input, got " + ShapeToString(input.shape()));
  }
}

Rng& RequireRng(Rng* rng) {
  if (!rng) throw InvalidArgument("training forward needs an RNG");
  return *rng;
}

template <typename T>
ModelOutput<T> Head(const Tensor<T>& latent, const ParameterStore<T>& p) {
  ModelOutput<T> out;
  out.latent = latent;
  out.logits = dense(latent, p.Get("head.weight"), p.Get("head.bias"));
  out.probabilities = softmax(out.logits);
  return out;
}

}  // namespace

template <typename T>
ModelOutput<T> cat_forward(const Tensor<T>& input, const CatConfig& cfg,
                           const ParameterStore<T>& p, bool training, Rng* rng) {
  RequireGrid(input, cfg.input_size);
  const bool stochastic = training && (cfg.dropout > 0.0 || cfg.drop_path_rate > 0.0);
  Rng dummy;
  Rng& r = stochastic ? RequireRng(rng) : dummy;

  const int s = cfg.input_size;
  Tensor<T> x = reshape(input, {1, s, s});
  x = maxpool2d(relu(conv2d(x, p.Get("conv1.weight"), p.Get("conv1.bias"))));
  x = maxpool2d(relu(conv2d(x, p.Get("conv2.weight"), p.Get("conv2.bias"))));
  const int e = cfg.embed_dim;
  const int n = cfg.num_tokens();
  Tensor<T> tokens = transpose(reshape(x, {e, n}));
  tokens = add(tokens, p.Get("pos_embedding"));
  tokens = dropout(tokens, cfg.dropout, training, r);

  for (int l = 0; l < cfg.num_layers; ++l) {
    const std::string b = "blocks." + std::to_string(l) + ".";
    // Stochastic depth grows linearly with depth, reaching drop_path_rate at
    // the last block.
    const double dp = cfg.num_layers > 1 ? cfg.drop_path_rate * l / (cfg.num_layers - 1)
                                         : cfg.drop_path_rate;
    const AttentionParams<T> attn{p.Get(b + "attn.wq"), p.Get(b + "attn.bq"),
                                  p.Get(b + "attn.wk"), p.Get(b + "attn.bk"),
                                  p.Get(b + "attn.wv"), p.Get(b + "attn.bv"),
                                  p.Get(b + "attn.wo"), p.Get(b + "attn.bo")};
    Tensor<T> h = layer_norm(tokens, p.Get(b + "norm1.gain"), p.Get(b + "norm1.bias"));
    h = multi_head_attention(h, attn, cfg.num_heads);
    tokens = add(tokens, drop_path(h, dp, training, r));

    h = layer_norm(tokens, p.Get(b + "norm2.gain"), p.Get(b + "norm2.bias"));
    h = gelu(dense(h, p.Get(b + "mlp.fc1.weight"), p.Get(b + "mlp.fc1.bias")));
    h = dropout(dense(h, p.Get(b + "mlp.fc2.weight"), p.Get(b + "mlp.fc2.bias")), cfg.dropout,
                training, r);
    tokens = add(tokens, drop_path(h, dp, training, r));
  }
  tokens = layer_norm(tokens, p.Get("norm.gain"), p.Get("norm.bias"));
  return Head(sequence_pool(tokens, p.Get("pool.u")), p);
}

template <typename T>
ModelOutput<T> cnn_forward(const Tensor<T>& input, const CnnConfig& cfg,
                           const ParameterStore<T>& p, bool training, Rng* rng) {
  RequireGrid(input, cfg.input_size);
  const bool stochastic = training && (cfg.conv_dropout > 0.0 || cfg.dense_dropout > 0.0);
  Rng dummy;
  Rng& r = stochastic ? RequireRng(rng) : dummy;
  const int s = cfg.input_size;
  Tensor<T> x = reshape(input, {1, s, s});
  x = maxpool2d(relu(conv2d(x, p.Get("conv1.weight"), p.Get("conv1.bias"))));
  x = maxpool2d(relu(conv2d(x, p.Get("conv2.weight"), p.Get("conv2.bias"))));
  x = dropout(x, cfg.conv_dropout, training, r);
  x = reshape(x, {static_cast<int>(x.size())});
  const Tensor<T> hidden = relu(dense(x, p.Get("fc1.weight"), p.Get("fc1.bias")));
  ModelOutput<T> out = Head(dropout(hidden, cfg.dense_dropout, training, r), p);
  out.latent = hidden;
  return out;
}

template <typename T>
ModelOutput<T> mlp_forward(const Tensor<T>& input, const MlpConfig& cfg,
                           const ParameterStore<T>& p, bool /*training*/, Rng* /*rng*/) {
  const int flat = cfg.input_size * cfg.input_size;
  if (input.size() != static_cast<std::size_t>(flat) || input.rank() > 2) {
    throw ShapeError("MLP expects " + std::to_string(flat) + " inputs, got " +
                     ShapeToString(input.shape()));
  }
  Tensor<T> x = reshape(input, {flat});
  x = sigmoid(dense(x, p.Get("fc1.weight"), p.Get("fc1.bias")));
  x = sigmoid(dense(x, p.Get("fc2.weight"), p.Get("fc2.bias")));
  return Head(x, p);
}

template <typename T>
Tensor<T> ToTensor(const Spectrogram& s) {
  std::vector<T> v(s.pixels.begin(), s.pixels.end());
  return Tensor<T>::Leaf({kSpectrogramSize, kSpectrogramSize}, std::move(v));
}

// -- Model ---------------------------------------------------------------------------

template <typename T>
Model<T>::Model(ModelConfig cfg, ParameterStore<T> params)
    : config_(std::move(cfg)), params_(std::move(params)) {
  Validate(config_);
}

template <typename T>
Model<T> Model<T>::Create(const ModelConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  return Model(cfg, init_parameters<T>(cfg, rng));
}

template <typename T>
ModelOutput<T> Model<T>::Forward(const Tensor<T>& input, bool training, Rng* rng) const {
  return std::visit(
      [&](const auto& c) -> ModelOutput<T> {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, CatConfig>) {
          return cat_forward(input, c, params_, training, rng);
        } else if constexpr (std::is_same_v<C, CnnConfig>) {
          return cnn_forward(input, c, params_, training, rng);
        } else {
          return mlp_forward(input, c, params_, training, rng);
        }
      },
      config_);
}

template <typename T>
ModelOutput<T> Model<T>::Forward(const Spectrogram& s) const {
  return Forward(ToTensor<T>(s), false, nullptr);
}

#define CATKIT_INSTANTIATE(T)                                                                 \
  template class ParameterStore<T>;                                                           \
  template class Model<T>;                                                                    \
  template ParameterStore<T> init_parameters<T>(const ModelConfig&, Rng&);                    \
  template ModelOutput<T> cat_forward<T>(const Tensor<T>&, const CatConfig&,                  \
                                         const ParameterStore<T>&, bool, Rng*);               \
  template ModelOutput<T> cnn_forward<T>(const Tensor<T>&, const CnnConfig&,                  \
                                         const ParameterStore<T>&, bool, Rng*);               \
  template ModelOutput<T> mlp_forward<T>(const Tensor<T>&, const MlpConfig&,                  \
                                         const ParameterStore<T>&, bool, Rng*);               \
  template Tensor<T> ToTensor<T>(const Spectrogram&);

CATKIT_INSTANTIATE(float)
CATKIT_INSTANTIATE(double)

#undef CATKIT_INSTANTIATE

}  // namespace catkit
