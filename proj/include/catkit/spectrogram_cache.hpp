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

#ifndef CATKIT_SPECTROGRAM_CACHE_HPP_
#define CATKIT_SPECTROGRAM_CACHE_HPP_

#include <filesystem>
#include <vector>

#include "catkit/dsp.hpp"

namespace catkit {

// Cache layout: "CATSPEC1", uint32 rows, uint32 cols (little-endian), then
// rows*cols float32 little-endian values in row-major order.
std::vector<unsigned char> encode_spectrogram(const Spectrogram& s);
Spectrogram decode_spectrogram(const std::vector<unsigned char>& bytes);

void write_spectrogram(const std::filesystem::path& path, const Spectrogram& s);
Spectrogram read_spectrogram(const std::filesystem::path& path);

}  // namespace catkit

#endif  // CATKIT_SPECTROGRAM_CACHE_HPP_
