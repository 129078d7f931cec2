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


#ifndef CATKIT_PARALLEL_HPP_
#define CATKIT_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace catkit {

// Worker cap: CATKIT_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int worker_threads();

// Calls fn(i) for every i in [0, n). Indices are split into contiguous
// blocks, one per worker, so each index always runs exactly once and
// results written to per-index slots do not depend on the thread count.
// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Keeps large tensor buffers on the heap instead of fresh mmap regions and
// stops the allocator from trimming between training steps. Idempotent.
void tune_allocator();

}  // namespace catkit

#endif  // CATKIT_PARALLEL_HPP_
