// Copyright 2026 The gcnseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace gcnseg {

/// Worker cap for data-parallel kernels. Defaults to the GCN_THREADS
/// environment variable, or 1 when unset.
int max_threads();

/// Sets the worker cap (clamped to >= 1). Thread-safe.
void set_max_threads(int threads);

/// Runs fn(begin, end) over disjoint contiguous chunks of [0, count).
///
/// Each index is processed by exactly one worker and per-index work must
/// not depend on the partition, so results are identical for every thread
/// count. Small loops (count < grain * 2) and nested calls run inline.
void parallel_for(std::size_t count, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace gcnseg
