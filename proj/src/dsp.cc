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

#include "catkit/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "catkit/errors.hpp"
#include "catkit/fft.hpp"

namespace catkit {

void Waveform::Validate() const {
  if (sample_rate_hz != kSampleRateHz) {
    throw InvalidArgument("sample rate must be 16000 Hz, got " +
                          std::to_string(sample_rate_hz));
  }
  if (samples.empty()) throw InvalidArgument("waveform has no samples");
}

FreqCrop ParseFreqCrop(const std::string& s) {
  if (s == "low") return FreqCrop::kLow;
  if (s == "high") return FreqCrop::kHigh;
  if (s == "center") return FreqCrop::kCenter;
  throw ConfigError("unknown frequency crop '" + s + "' (expected low|high|center)");
}

std::string ToString(FreqCrop crop) {
  switch (crop) {
    case FreqCrop::kLow:
      return "low";
    case FreqCrop::kHigh:
      return "high";
    case FreqCrop::kCenter:
      return "center";
  }
  return "low";
}

void SpectrogramOptions::Validate() const {
  if (win_len < 2) throw ConfigError("window length must be >= 2");
  if (hop < 1) throw ConfigError("hop must be >= 1");
  if (!IsPowerOfTwo(fft_len) || fft_len < win_len) {
    throw ConfigError("FFT length must be a power of two no shorter than the window");
  }
  if (fft_len / 2 + 1 < kSpectrogramSize) {
    throw ConfigError("FFT length too small to provide 128 frequency bins");
  }
}

std::vector<double> hann_window(int n) {
  if (n < 2) throw InvalidArgument("Hann window length must be >= 2");
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) {
    w[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / n));
  }
  return w;
}

std::size_t frame_count(std::size_t num_samples, int win_len, int hop) {
  if (num_samples < static_cast<std::size_t>(win_len)) return 0;
  return (num_samples - win_len) / hop + 1;
}

Grid stft_magnitude(const Waveform& w, const SpectrogramOptions& opts) {
  opts.Validate();
  w.Validate();
  if (w.samples.size() < static_cast<std::size_t>(opts.win_len)) {
    throw TooShortError("signal has " + std::to_string(w.samples.size()) +
                        " samples, fewer than the " + std::to_string(opts.win_len) +
                        "-sample window");
  }
  const std::size_t frames = frame_count(w.samples.size(), opts.win_len, opts.hop);
  const int bins = opts.fft_len / 2 + 1;
  const std::vector<double> window = hann_window(opts.win_len);
  const Fft fft(opts.fft_len);

  Grid out(static_cast<int>(frames), bins);
  std::vector<double> frame(opts.win_len);
  std::vector<std::complex<double>> scratch;
  for (std::size_t f = 0; f < frames; ++f) {
    const double* src = w.samples.data() + f * opts.hop;
    for (int i = 0; i < opts.win_len; ++i) frame[i] = src[i] * window[i];
    fft.RealMagnitude(frame, std::span<double>(&out.at(static_cast<int>(f), 0), bins),
                      scratch);
  }
  return out;
}

double to_decibels(double mag) { return 20.0 * std::log10(std::max(mag, 1e-10)); }

Grid to_decibels(const Grid& mag) {
  Grid out = mag;
  for (double& v : out.values) v = to_decibels(v);
  return out;
}

Spectrogram shape_and_normalize(const Grid& db, FreqCrop crop) {
  if (db.rows < 1) throw ShapeError("spectrogram needs at least one frame");
  if (db.cols < kSpectrogramSize) {
    throw ShapeError("spectrogram needs at least 128 frequency bins");
  }
  int first_bin = 0;
  switch (crop) {
    case FreqCrop::kLow:
      first_bin = 0;
      break;
    case FreqCrop::kHigh:
      first_bin = db.cols - kSpectrogramSize;
      break;
    case FreqCrop::kCenter:
      first_bin = (db.cols - kSpectrogramSize) / 2;
      break;
  }

  constexpr int n = kSpectrogramSize;
  std::vector<double> grid(n * n, kDecibelFloor);
  const int frames = std::min(db.rows, n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < frames; ++col) grid[row * n + col] = db.at(col, first_bin + row);
  }

  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  const double min_v = *lo;
  const double range = *hi - *lo;
  Spectrogram out;
  if (range > 0.0) {
    for (int i = 0; i < n * n; ++i) {
      out.pixels[i] = static_cast<float>(std::clamp((grid[i] - min_v) / range, 0.0, 1.0));
    }
  }
  return out;
}

Spectrogram spectrogram(const Waveform& w, const SpectrogramOptions& opts) {
  return shape_and_normalize(to_decibels(stft_magnitude(w, opts)), opts.freq_crop);
}

}  // namespace catkit
