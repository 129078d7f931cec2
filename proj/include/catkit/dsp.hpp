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

#ifndef CATKIT_DSP_HPP_
#define CATKIT_DSP_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace catkit {

inline constexpr int kSampleRateHz = 16000;
inline constexpr int kSpectrogramSize = 128;

struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kSampleRateHz;

  // Throws InvalidArgument unless the rate is 16 kHz and samples is non-empty.
  void Validate() const;
};

// Dense row-major real matrix used between the STFT stages.
struct Grid {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(int r, int c, double fill = 0.0) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, fill) {}
  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

// 128x128 model input. Row 0 is the lowest retained frequency band, columns
// are successive analysis frames. Every pixel lies in [0, 1].
struct Spectrogram {
  std::vector<float> pixels = std::vector<float>(kSpectrogramSize * kSpectrogramSize, 0.0f);

  float at(int row, int col) const { return pixels[row * kSpectrogramSize + col]; }
  float& at(int row, int col) { return pixels[row * kSpectrogramSize + col]; }
};

enum class FreqCrop { kLow, kHigh, kCenter };

FreqCrop ParseFreqCrop(const std::string& s);
std::string ToString(FreqCrop crop);

struct SpectrogramOptions {
  int win_len = 512;
  int hop = 128;
  int fft_len = 512;
  FreqCrop freq_crop = FreqCrop::kLow;

  void Validate() const;
};

inline constexpr double kDecibelFloor = -200.0;

// Periodic Hann window: w[k] = 0.5 (1 - cos(2 pi k / n)).
std::vector<double> hann_window(int n);

// Number of full frames; the partial tail frame is dropped.
std::size_t frame_count(std::size_t num_samples, int win_len, int hop);

// frames x (fft_len/2 + 1) one-sided magnitudes of the windowed DFT.
Grid stft_magnitude(const Waveform& w, const SpectrogramOptions& opts = {});

// 20 log10(max(mag, 1e-10)), elementwise.
Grid to_decibels(const Grid& mag);
double to_decibels(double mag);

// Crops/pads the frames x bins dB grid to 128x128 (frequency rows, time
// columns; missing columns are filled with the dB floor) then min-max
// normalizes. A constant grid yields all zeros.
Spectrogram shape_and_normalize(const Grid& db, FreqCrop crop = FreqCrop::kLow);

Spectrogram spectrogram(const Waveform& w, const SpectrogramOptions& opts = {});

}  // namespace catkit

#endif  // CATKIT_DSP_HPP_
