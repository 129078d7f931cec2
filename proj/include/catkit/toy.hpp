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


#ifndef CATKIT_TOY_HPP_
#define CATKIT_TOY_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "catkit/data.hpp"
#include "catkit/dsp.hpp"

namespace catkit {

// Spectral fingerprint of one pseudo-synthesizer.
struct Fingerprint {
  std::string name;
  double comb_period_ms = 1.0;
  double spectral_tilt_db_per_octave = -6.0;
  double noise_notch_hz = 2000.0;
  double phase_jitter = 0.05;  // radians of phase random walk per 5 ms
};

struct ToySpec {
  std::vector<Fingerprint> known;
  std::vector<Fingerprint> unknown;
  double f0_min_hz = 80.0;
  double f0_max_hz = 300.0;
  double max_harmonic_hz = 4000.0;
  double envelope_hz = 4.0;
  double duration_s = 1.1;
  double noise_level = 0.05;
  std::uint64_t seed = 0;

  // Built-in fingerprint table: up to 8 known and 4 unknown synthesizers.
  static ToySpec Default(int known_k, int unknown_k, std::uint64_t seed);
  void Validate() const;
};

// One utterance from `fp`, fully determined by `seed`.
Waveform synthesize_toy(const Fingerprint& fp, const ToySpec& spec, std::uint64_t seed);

// Writes <out_dir>/<synthesizer>/<split>_<nnnn>.wav plus manifest.csv.
// Unknown synthesizers get test files only. Files are generated in parallel
// with per-file seeds, so the corpus does not depend on the thread count.
Manifest gen_toy(const ToySpec& spec, int per_class_train, int per_class_test,
                 const std::filesystem::path& out_dir, int per_unknown_test = -1);

}  // namespace catkit

#endif  // CATKIT_TOY_HPP_
