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


#include "catkit/toy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "catkit/errors.hpp"
#include "catkit/parallel.hpp"
#include "catkit/rng.hpp"
#include "catkit/wav.hpp"

namespace catkit {

namespace {

constexpr double kPi = std::numbers::pi;

// Known fingerprints spread over each cue. Unknown ones combine cue values
// no known synthesizer carries: a midway point between two known classes, or
// a comb period and jitter past the known range.
const Fingerprint kKnown[] = {
    {"toy_a", 0.7, -3.0, 1200.0, 0.02},  {"toy_b", 1.3, -9.0, 2600.0, 0.30},
    {"toy_c", 2.2, -5.0, 3400.0, 0.10},  {"toy_d", 3.0, -12.0, 800.0, 0.50},
    {"toy_e", 1.0, -7.0, 3000.0, 0.70},  {"toy_f", 2.6, -2.0, 1800.0, 0.05},
    {"toy_g", 1.7, -10.0, 600.0, 0.20},  {"toy_h", 0.5, -4.0, 2200.0, 0.40},
};
const Fingerprint kUnknown[] = {
    {"toy_u1", 1.5, -4.0, 2300.0, 0.10}, {"toy_u2", 4.0, -6.0, 3800.0, 1.20},
    {"toy_u3", 1.15, -8.0, 2800.0, 0.50}, {"toy_u4", 2.0, -9.5, 1900.0, 0.60},
};

// Second-order notch, constant-skirt-gain form.
struct Biquad {
  double b0, b1, b2, a1, a2;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  static Biquad Notch(double f0, double q, double fs) {
    const double w = 2.0 * kPi * f0 / fs;
    const double alpha = std::sin(w) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    return {1.0 / a0, -2.0 * std::cos(w) / a0, 1.0 / a0, -2.0 * std::cos(w) / a0,
            (1.0 - alpha) / a0};
  }
  double operator()(double x) {
    const double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

ToySpec ToySpec::Default(int known_k, int unknown_k, std::uint64_t seed) {
  constexpr int kMaxKnown = static_cast<int>(std::size(kKnown));
  constexpr int kMaxUnknown = static_cast<int>(std::size(kUnknown));
  if (known_k < 2 || known_k > kMaxKnown) {
    throw ConfigError("known_k must lie in [2, " + std::to_string(kMaxKnown) + "]");
  }
  if (unknown_k < 0 || unknown_k > kMaxUnknown) {
    throw ConfigError("unknown_k must lie in [0, " + std::to_string(kMaxUnknown) + "]");
  }
  ToySpec s;
  s.known.assign(kKnown, kKnown + known_k);
  s.unknown.assign(kUnknown, kUnknown + unknown_k);
  s.seed = seed;
  return s;
}

void ToySpec::Validate() const {
  if (known.size() < 2) throw ConfigError("need at least 2 known pseudo-synthesizers");
  if (!(f0_min_hz > 0 && f0_max_hz >= f0_min_hz)) throw ConfigError("bad f0 range");
  if (!(max_harmonic_hz > f0_max_hz && max_harmonic_hz < kSampleRateHz / 2.0)) {
    throw ConfigError("max harmonic must lie between f0_max and Nyquist");
  }
  if (!(duration_s * kSampleRateHz >= 512)) throw ConfigError("duration shorter than one window");
  if (!(noise_level >= 0)) throw ConfigError("noise level must be >= 0");
  std::set<std::string> names;
  std::set<std::tuple<double, double, double, double>> prints;
  for (const auto* group : {&known, &unknown}) {
    for (const auto& fp : *group) {
      if (!names.insert(fp.name).second) throw ConfigError("duplicate synthesizer " + fp.name);
      if (!prints.emplace(fp.comb_period_ms, fp.spectral_tilt_db_per_octave, fp.noise_notch_hz,
                          fp.phase_jitter)
               .second) {
        throw ConfigError("fingerprint of " + fp.name + " repeats another synthesizer");
      }
      if (!(fp.comb_period_ms > 0) || !(fp.noise_notch_hz > 0 && fp.noise_notch_hz < 8000) ||
          !(fp.phase_jitter >= 0)) {
        throw ConfigError("fingerprint of " + fp.name + " is out of range");
      }
    }
  }
}

Waveform synthesize_toy(const Fingerprint& fp, const ToySpec& spec, std::uint64_t seed) {
  const double fs = kSampleRateHz;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * fs));
  Rng rng(seed);

  // Slowly wandering F0 inside [f0_min, f0_max].
  const double f0 = spec.f0_min_hz + (spec.f0_max_hz - spec.f0_min_hz) * rng.Uniform();
  const double vib_rate = 0.5 + 1.5 * rng.Uniform();
  const double vib_phase = 2.0 * kPi * rng.Uniform();
  const double env_phase = 2.0 * kPi * rng.Uniform();
  const int harmonics = std::max(1, static_cast<int>(spec.max_harmonic_hz / (f0 * 1.08)));

  std::vector<double> amp(harmonics), phase(harmonics), step(harmonics), next_step(harmonics);
  for (int k = 0; k < harmonics; ++k) {
    const double octaves = std::log2(static_cast<double>(k + 1));
    amp[k] = std::pow(10.0, fp.spectral_tilt_db_per_octave * octaves / 20.0);
    phase[k] = 2.0 * kPi * rng.Uniform();
    step[k] = fp.phase_jitter * rng.Normal();
    next_step[k] = fp.phase_jitter * rng.Normal();
  }

  constexpr std::size_t kJitterBlock = 80;  // 5 ms
  std::vector<double> x(n, 0.0);
  double theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && i % kJitterBlock == 0) {
      for (int k = 0; k < harmonics; ++k) {
        step[k] = next_step[k];
        next_step[k] = fp.phase_jitter * rng.Normal();
      }
    }
    const double t = static_cast<double>(i) / fs;
    const double f = f0 * (1.0 + 0.08 * std::sin(2.0 * kPi * vib_rate * t + vib_phase));
    theta += 2.0 * kPi * f / fs;
    const double frac = static_cast<double>(i % kJitterBlock) / kJitterBlock;
    double s = 0.0;
    for (int k = 0; k < harmonics; ++k) {
      const double jitter = step[k] + frac * (next_step[k] - step[k]);
      s += amp[k] * std::sin((k + 1) * theta + phase[k] + jitter);
    }
    const double env = 0.2 + 0.8 * 0.5 * (1.0 - std::cos(2.0 * kPi * spec.envelope_hz * t + env_phase));
    x[i] = env * s;
  }

  // Feed-forward comb: ripple spaced 1 / period in frequency.
  const auto delay = static_cast<std::size_t>(std::max(1L, std::lround(fp.comb_period_ms * fs / 1000.0)));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + (i >= delay ? 0.7 * x[i - delay] : 0.0);

  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  if (peak > 0) {
    for (double& v : y) v /= peak;
  }

  Biquad notch = Biquad::Notch(fp.noise_notch_hz, 1.2, fs);
  for (std::size_t i = 0; i < n; ++i) y[i] += spec.noise_level * notch(rng.Normal());

  peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  const double gain = (0.4 + 0.5 * rng.Uniform()) / std::max(peak, 1e-12);
  Waveform w;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.samples[i] = y[i] * gain;
  return w;
}

Manifest gen_toy(const ToySpec& spec, int per_class_train, int per_class_test,
                 const std::filesystem::path& out_dir, int per_unknown_test) {
  spec.Validate();
  if (per_class_train < 1 || per_class_test < 0) {
    throw ConfigError("need >= 1 train and >= 0 test files per class");
  }
  if (per_unknown_test < 0) per_unknown_test = per_class_test;

  struct Job {
    const Fingerprint* fp;
    Split split;
    bool known;
    int index;
  };
  std::vector<Job> jobs;
  for (const auto& fp : spec.known) {
    for (int i = 0; i < per_class_train; ++i) jobs.push_back({&fp, Split::kTrain, true, i});
    for (int i = 0; i < per_class_test; ++i) jobs.push_back({&fp, Split::kTest, true, i});
  }
  for (const auto& fp : spec.unknown) {
    for (int i = 0; i < per_unknown_test; ++i) jobs.push_back({&fp, Split::kTest, false, i});
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  Manifest m;
  m.base_dir = out_dir;
  m.entries.resize(jobs.size());
  for (const auto& fp : spec.known) m.classes.push_back(fp.name);
  for (const auto* group : {&spec.known, &spec.unknown}) {
    for (const auto& fp : *group) {
      std::filesystem::create_directories(out_dir / fp.name, ec);
      if (ec) throw IoError("cannot create " + (out_dir / fp.name).string() + ": " + ec.message());
    }
  }

  const Rng root(spec.seed);
  parallel_for(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    char name[32];
    std::snprintf(name, sizeof(name), "%s_%04d.wav", ToString(job.split).c_str(), job.index);
    const std::string rel = job.fp->name + "/" + name;
    const std::uint64_t file_seed = root.Fork(j)();
    write_wav(out_dir / rel, synthesize_toy(*job.fp, spec, file_seed));
    m.entries[j] = {rel, job.fp->name, job.split, job.known};
  });
  write_manifest(out_dir / "manifest.csv", m);
  return m;
}

}  // namespace catkit
