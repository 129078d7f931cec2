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

#ifndef CATKIT_WAV_HPP_
#define CATKIT_WAV_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "catkit/dsp.hpp"

namespace catkit {

// Reads a RIFF/WAVE file holding 16-bit signed little-endian mono PCM at
// 16 kHz. Samples are scaled to [-1, 1) by dividing by 32768.
Waveform read_wav(const std::filesystem::path& path);
Waveform decode_wav(const std::vector<unsigned char>& bytes);

// Writes a canonical 44-byte-header PCM16 mono file. Amplitudes are clipped
// to the representable range.
void write_wav(const std::filesystem::path& path, const Waveform& w);
std::vector<unsigned char> encode_wav(const Waveform& w);

}  // namespace catkit

#endif  // CATKIT_WAV_HPP_
