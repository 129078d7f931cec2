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

#include "catkit/fft.hpp"

#include <cmath>
#include <numbers>

#include "catkit/errors.hpp"

namespace catkit {

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

Fft::Fft(int n) : n_(n), bitrev_(n), twiddle_(n / 2) {
  if (!IsPowerOfTwo(n)) throw InvalidArgument("FFT length must be a power of two");
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (1 << b)) r |= 1 << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  for (int k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * k / n;
    twiddle_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Fft::Forward(std::span<std::complex<double>> data) const {
  for (int i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  }
  for (int len = 2; len <= n_; len <<= 1) {
    const int half = len / 2;
    const int stride = n_ / len;
    for (int start = 0; start < n_; start += len) {
      for (int k = 0; k < half; ++k) {
        const std::complex<double> t = twiddle_[k * stride] * data[start + k + half];
        data[start + k + half] = data[start + k] - t;
        data[start + k] += t;
      }
    }
  }
}

void Fft::RealMagnitude(std::span<const double> frame, std::span<double> out,
                        std::vector<std::complex<double>>& scratch) const {
  scratch.assign(n_, {0.0, 0.0});
  for (std::size_t i = 0; i < frame.size() && i < static_cast<std::size_t>(n_); ++i) {
    scratch[i] = {frame[i], 0.0};
  }
  Forward(scratch);
  for (int k = 0; k <= n_ / 2; ++k) out[k] = std::abs(scratch[k]);
}

}  // namespace catkit
