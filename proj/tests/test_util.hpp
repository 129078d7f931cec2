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


#ifndef CATKIT_TESTS_TEST_UTIL_HPP_
#define CATKIT_TESTS_TEST_UTIL_HPP_

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "catkit/rng.hpp"

namespace catkit::testing {

// Fresh scratch directory under CATKIT_TEST_TMP (or the system temp dir).
inline std::filesystem::path ScratchDir(const std::string& name) {
  const char* root = std::getenv("CATKIT_TEST_TMP");
  std::filesystem::path dir =
      (root ? std::filesystem::path(root) : std::filesystem::temp_directory_path() / "catkit_tests") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<double> RandomVector(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.Normal();
  return v;
}

}  // namespace catkit::testing

#endif  // CATKIT_TESTS_TEST_UTIL_HPP_
