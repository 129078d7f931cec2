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


#include "catkit/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "catkit/errors.hpp"
#include "catkit/parallel.hpp"
#include "catkit/rng.hpp"
#include "catkit/spectrogram_cache.hpp"
#include "catkit/wav.hpp"

namespace catkit {

Split ParseSplit(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  throw ValidationError("unknown split '" + s + "' (expected train|test)");
}

std::string ToString(Split split) { return split == Split::kTrain ? "train" : "test"; }

int Manifest::ClassIndex(const std::string& synthesizer) const {
  auto it = std::find(classes.begin(), classes.end(), synthesizer);
  return it == classes.end() ? -1 : static_cast<int>(it - classes.begin());
}

std::filesystem::path Manifest::Resolve(const ManifestEntry& e) const {
  std::filesystem::path p(e.filepath);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(Trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ValidationError("unterminated quote in manifest line: " + line);
  out.push_back(Trim(cur));
  return out;
}

bool ParseKnown(std::string s, int line_no) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("line " + std::to_string(line_no) + ": bad known flag '" + s + "'");
}

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Manifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::set<std::string> seen_paths;
  std::map<std::string, bool> kind_of;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto cols = SplitCsv(t);
    if (!have_header) {
      if (cols != std::vector<std::string>{"filepath", "synthesizer", "split", "known"}) {
        throw ValidationError("manifest header must be 'filepath,synthesizer,split,known'");
      }
      have_header = true;
      continue;
    }
    if (cols.size() != 4) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 4 columns, got " +
                            std::to_string(cols.size()));
    }
    ManifestEntry e;
    e.filepath = cols[0];
    e.synthesizer = cols[1];
    if (e.filepath.empty() || e.synthesizer.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": empty filepath or synthesizer");
    }
    e.split = ParseSplit(cols[2]);
    e.known = ParseKnown(cols[3], line_no);
    if (e.split == Split::kTrain && !e.known) {
      throw ValidationError("line " + std::to_string(line_no) + ": unknown synthesizer '" +
                            e.synthesizer + "' in the train split");
    }
    if (!seen_paths.insert(e.filepath).second) {
      throw ValidationError("duplicate filepath: " + e.filepath);
    }
    auto [it, inserted] = kind_of.emplace(e.synthesizer, e.known);
    if (!inserted && it->second != e.known) {
      throw ValidationError("synthesizer '" + e.synthesizer + "' is marked both known and unknown");
    }
    if (e.known && inserted) m.classes.push_back(e.synthesizer);
    m.entries.push_back(std::move(e));
  }
  if (!have_header) throw ValidationError("manifest is empty");
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

std::string format_manifest(const Manifest& m) {
  std::ostringstream out;
  out << "filepath,synthesizer,split,known\n";
  for (const auto& e : m.entries) {
    out << Quote(e.filepath) << ',' << Quote(e.synthesizer) << ',' << ToString(e.split) << ','
        << (e.known ? "true" : "false") << '\n';
  }
  return out.str();
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write manifest " + path.string());
  f << format_manifest(m);
  if (!f) throw IoError("write failed: " + path.string());
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("split fraction must lie in (0, 1)");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::vector<std::size_t> first, second;
  Rng rng(seed);
  for (auto& [label, idx] : by_class) {
    Rng r = rng.Fork(static_cast<std::uint64_t>(label) + 1);
    std::shuffle(idx.begin(), idx.end(), r);
    const auto n_second = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
    first.insert(first.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_second), idx.end());
    second.insert(second.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_second));
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {std::move(first), std::move(second)};
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  Dataset out;
  for (std::size_t i : indices) {
    if (i >= size()) throw InvalidArgument("subset index out of range");
    out.inputs.push_back(inputs[i]);
    out.labels.push_back(labels[i]);
    out.paths.push_back(paths[i]);
    out.synthesizers.push_back(synthesizers[i]);
    out.known.push_back(known[i]);
  }
  return out;
}

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, const std::string& filepath,
                                 const SpectrogramOptions& opts) {
  // FNV-1a over the path and every option that changes the pixels.
  const std::string key = filepath + "|" + std::to_string(opts.win_len) + "|" +
                          std::to_string(opts.hop) + "|" + std::to_string(opts.fft_len) + "|" +
                          ToString(opts.freq_crop);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return cache_dir / (std::string(buf) + ".spec");
}

Dataset load_dataset(const Manifest& m, Split split, const SpectrogramOptions& opts,
                     bool known_only, const std::filesystem::path& cache_dir) {
  opts.Validate();
  std::vector<const ManifestEntry*> rows;
  for (const auto& e : m.entries) {
    if (e.split == split && (e.known || !known_only)) rows.push_back(&e);
  }
  Dataset d;
  d.inputs.resize(rows.size());
  if (!cache_dir.empty()) std::filesystem::create_directories(cache_dir);
  parallel_for(rows.size(), [&](std::size_t i) {
    const ManifestEntry& e = *rows[i];
    if (!cache_dir.empty()) {
      const auto cp = cache_path(cache_dir, e.filepath, opts);
      if (std::filesystem::exists(cp)) {
        d.inputs[i] = read_spectrogram(cp);
        return;
      }
      d.inputs[i] = spectrogram(read_wav(m.Resolve(e)), opts);
      write_spectrogram(cp, d.inputs[i]);
      return;
    }
    d.inputs[i] = spectrogram(read_wav(m.Resolve(e)), opts);
  });
  for (const ManifestEntry* e : rows) {
    d.labels.push_back(e->known ? m.ClassIndex(e->synthesizer) : -1);
    d.paths.push_back(e->filepath);
    d.synthesizers.push_back(e->synthesizer);
    d.known.push_back(e->known);
  }
  return d;
}

}  // namespace catkit
