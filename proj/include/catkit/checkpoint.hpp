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


#ifndef CATKIT_CHECKPOINT_HPP_
#define CATKIT_CHECKPOINT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "catkit/dsp.hpp"
#include "catkit/models.hpp"
#include "json.hpp"

namespace catkit {

// Layout: "CATCKPT1", u64 LE header length, UTF-8 JSON header, then float32
// LE blobs. Header keys: arch, config, tensors [{name, shape, offset, bytes}]
// with offsets relative to the first blob byte, plus metadata.
struct Checkpoint {
  ModelConfig config;
  ParameterStore<float> params;
  std::vector<std::string> class_names;
  SpectrogramOptions spectrogram;
  // Free-form run record: resolved config, seed, best epoch, threshold.
  nlohmann::json metadata = nlohmann::json::object();

  Model<float> ToModel() const { return Model<float>(config, params.Clone()); }
};

std::vector<unsigned char> encode_checkpoint(const Checkpoint& c);
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);

nlohmann::json ToJson(const SpectrogramOptions& o);
SpectrogramOptions SpectrogramOptionsFromJson(const nlohmann::json& j);

}  // namespace catkit

#endif  // CATKIT_CHECKPOINT_HPP_
