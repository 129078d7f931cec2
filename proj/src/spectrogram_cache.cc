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

#include "catkit/spectrogram_cache.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "catkit/errors.hpp"

namespace catkit {
namespace {

constexpr char kMagic[8] = {'C', 'A', 'T', 'S', 'P', 'E', 'C', '1'};

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t GetU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<unsigned char> encode_spectrogram(const Spectrogram& s) {
  std::vector<unsigned char> out(kMagic, kMagic + 8);
  PutU32(out, kSpectrogramSize);
  PutU32(out, kSpectrogramSize);
  for (float v : s.pixels) PutU32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Spectrogram decode_spectrogram(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw DataError("missing CATSPEC1 magic");
  }
  const std::uint32_t rows = GetU32(bytes.data() + 8);
  const std::uint32_t cols = GetU32(bytes.data() + 12);
  if (rows != kSpectrogramSize || cols != kSpectrogramSize) {
    throw ShapeError("cached spectrogram is " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", expected 128x128");
  }
  if (bytes.size() != 16 + 4ull * rows * cols) throw DataError("truncated spectrogram cache");
  Spectrogram s;
  for (std::size_t i = 0; i < s.pixels.size(); ++i) {
    s.pixels[i] = std::bit_cast<float>(GetU32(bytes.data() + 16 + 4 * i));
  }
  return s;
}

void write_spectrogram(const std::filesystem::path& path, const Spectrogram& s) {
  const auto bytes = encode_spectrogram(s);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

Spectrogram read_spectrogram(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_spectrogram(bytes);
}

}  // namespace catkit
