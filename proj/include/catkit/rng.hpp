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

#ifndef CATKIT_RNG_HPP_
#define CATKIT_RNG_HPP_

#include <cstdint>
#include <limits>

namespace catkit {

// Counter-based generator: the n-th draw is a pure function of (key, n), so a
// run can be replayed from its seed and a stream can be forked without
// touching the parent's sequence.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : key_(Mix(seed ^ 0x9e3779b97f4a7c15ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return Mix(key_ + 0xbf58476d1ce4e5b9ULL * ++counter_); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Standard normal via Box-Muller; consumes two draws per call.
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);

  // Independent stream keyed by (this key, id); does not advance this one.
  Rng Fork(std::uint64_t id) const;

  std::uint64_t counter() const { return counter_; }

 private:
  static std::uint64_t Mix(std::uint64_t z);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace catkit

#endif  // CATKIT_RNG_HPP_
