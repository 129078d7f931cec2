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


#ifndef CATKIT_DATA_HPP_
#define CATKIT_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catkit/dsp.hpp"

namespace catkit {

enum class Split { kTrain, kTest };

Split ParseSplit(const std::string& s);  // train | test
std::string ToString(Split split);

struct ManifestEntry {
  std::string filepath;
  std::string synthesizer;
  Split split = Split::kTrain;
  bool known = true;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  // Known synthesizers in first-appearance order; position = class index.
  std::vector<std::string> classes;
  // Relative file paths resolve against this directory.
  std::filesystem::path base_dir;

  // Class index of a known synthesizer, -1 for anything else.
  int ClassIndex(const std::string& synthesizer) const;
  std::filesystem::path Resolve(const ManifestEntry& e) const;
};

// CSV with header `filepath,synthesizer,split,known`. Blank lines and lines
// starting with '#' are skipped. `known` accepts true/false, 1/0, yes/no.
Manifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir = {});
Manifest load_manifest(const std::filesystem::path& path);
std::string format_manifest(const Manifest& m);
void write_manifest(const std::filesystem::path& path, const Manifest& m);

// Per-class proportional split of sample indices: round(fraction * count)
// of each class goes to the second part. Deterministic in `seed`.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double fraction, std::uint64_t seed);

// Spectrograms plus bookkeeping for one manifest split. label is the known
// class index or -1 for unknown synthesizers.
struct Dataset {
  std::vector<Spectrogram> inputs;
  std::vector<int> labels;
  std::vector<std::string> paths;
  std::vector<std::string> synthesizers;
  std::vector<bool> known;

  std::size_t size() const { return inputs.size(); }
  Dataset Subset(std::span<const std::size_t> indices) const;
};

// Cache file name for one input under `opts`.
std::filesystem::path cache_path(const std::filesystem::path& cache_dir, const std::string& filepath,
                                 const SpectrogramOptions& opts);

// Reads every entry of `split` (only known ones when known_only). With a
// non-empty cache_dir, cached spectrograms are reused and missing ones are
// written. Files are decoded in parallel.
Dataset load_dataset(const Manifest& m, Split split, const SpectrogramOptions& opts,
                     bool known_only, const std::filesystem::path& cache_dir = {});

}  // namespace catkit

#endif  // CATKIT_DATA_HPP_
