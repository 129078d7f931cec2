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


#include "catkit/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "catkit/errors.hpp"

namespace catkit {

namespace {

constexpr char kMagic[8] = {'C', 'A', 'T', 'C', 'K', 'P', 'T', '1'};

static_assert(std::endian::native == std::endian::little, "little-endian host required");

void PutU64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint64_t GetU64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

nlohmann::json ToJson(const SpectrogramOptions& o) {
  return {{"win_len", o.win_len},
          {"hop", o.hop},
          {"fft_len", o.fft_len},
          {"freq_crop", ToString(o.freq_crop)}};
}

SpectrogramOptions SpectrogramOptionsFromJson(const nlohmann::json& j) {
  SpectrogramOptions o;
  try {
    o.win_len = j.value("win_len", o.win_len);
    o.hop = j.value("hop", o.hop);
    o.fft_len = j.value("fft_len", o.fft_len);
    if (j.contains("freq_crop")) o.freq_crop = ParseFreqCrop(j.at("freq_crop").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed spectrogram options: ") + e.what());
  }
  o.Validate();
  return o;
}

std::vector<unsigned char> encode_checkpoint(const Checkpoint& c) {
  nlohmann::json header;
  header["arch"] = ToString(ArchOf(c.config));
  header["config"] = ToJson(c.config);
  header["classes"] = c.class_names;
  header["spectrogram"] = ToJson(c.spectrogram);
  header["metadata"] = c.metadata;
  nlohmann::json index = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : c.params.entries()) {
    const std::uint64_t bytes = t.size() * sizeof(float);
    index.push_back({{"name", name}, {"shape", t.shape()}, {"offset", offset}, {"bytes", bytes}});
    offset += bytes;
  }
  header["tensors"] = index;
  const std::string text = header.dump();

  std::vector<unsigned char> out(kMagic, kMagic + 8);
  PutU64(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  const std::size_t blob_start = out.size();
  out.resize(blob_start + offset);
  std::size_t pos = blob_start;
  for (const auto& entry : c.params.entries()) {
    const auto data = entry.second.data();
    std::memcpy(out.data() + pos, data.data(), data.size_bytes());
    pos += data.size_bytes();
  }
  return out;
}

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw DataError("not a checkpoint (bad magic)");
  }
  const std::uint64_t len = GetU64(bytes.data() + 8);
  if (len > bytes.size() - 16) throw DataError("truncated checkpoint header");
  Checkpoint c;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(len));
    c.config = ModelConfigFromJson(header.at("config"));
    if (ToString(ArchOf(c.config)) != header.at("arch").get<std::string>()) {
      throw DataError("checkpoint arch does not match its config");
    }
    c.class_names = header.value("classes", std::vector<std::string>{});
    if (header.contains("spectrogram")) c.spectrogram = SpectrogramOptionsFromJson(header["spectrogram"]);
    if (header.contains("metadata")) c.metadata = header["metadata"];
    const std::size_t blob_start = 16 + len;
    const std::size_t blob_size = bytes.size() - blob_start;
    for (const auto& t : header.at("tensors")) {
      const auto name = t.at("name").get<std::string>();
      const auto shape = t.at("shape").get<Shape>();
      const auto offset = t.at("offset").get<std::uint64_t>();
      const auto nbytes = t.at("bytes").get<std::uint64_t>();
      if (nbytes != NumElements(shape) * sizeof(float)) {
        throw DataError("tensor " + name + ": byte count does not match shape");
      }
      if (offset > blob_size || nbytes > blob_size - offset) {
        throw DataError("tensor " + name + " runs past the end of the file");
      }
      std::vector<float> values(NumElements(shape));
      std::memcpy(values.data(), bytes.data() + blob_start + offset, nbytes);
      c.params.Add(name, shape, std::move(values));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint header: ") + e.what());
  }
  if (!c.class_names.empty() && static_cast<int>(c.class_names.size()) != NumClasses(c.config)) {
    throw DataError("checkpoint class list does not match the model head");
  }
  // Reject files whose tensors do not match what the config would create.
  Rng probe(0);
  const auto expected = init_parameters<float>(c.config, probe);
  if (expected.entries().size() != c.params.entries().size()) {
    throw DataError("checkpoint tensor set does not match its config");
  }
  for (std::size_t i = 0; i < expected.entries().size(); ++i) {
    const auto& [en, et] = expected.entries()[i];
    const auto& [gn, gt] = c.params.entries()[i];
    if (en != gn || et.shape() != gt.shape()) {
      throw DataError("checkpoint tensor " + gn + " does not match its config");
    }
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  const auto bytes = encode_checkpoint(c);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace catkit
