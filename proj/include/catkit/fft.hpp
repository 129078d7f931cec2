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

#ifndef CATKIT_FFT_HPP_
#define CATKIT_FFT_HPP_

#include <complex>
#include <span>
#include <vector>

namespace catkit {

// In-place iterative radix-2 FFT for a fixed power-of-two length.
class Fft {
 public:
  explicit Fft(int n);

  int size() const { return n_; }
  void Forward(std::span<std::complex<double>> data) const;

  // One-sided magnitude spectrum (n/2 + 1 bins) of a real frame.
  void RealMagnitude(std::span<const double> frame, std::span<double> out,
                     std::vector<std::complex<double>>& scratch) const;

 private:
  int n_;
  std::vector<int> bitrev_;
  std::vector<std::complex<double>> twiddle_;
};

bool IsPowerOfTwo(int n);

}  // namespace catkit

#endif  // CATKIT_FFT_HPP_
