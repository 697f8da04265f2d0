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

#include "gcnseg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gcnseg {

namespace {

int initial_thread_count() {
    if (const char* env = std::getenv("GCN_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    return 1;
}

std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{initial_thread_count()};
    return cap;
}

thread_local bool g_inside_parallel = false;

}  // namespace

int max_threads() { return thread_cap().load(std::memory_order_relaxed); }

void set_max_threads(int threads) {
    thread_cap().store(std::max(1, threads), std::memory_order_relaxed);
}

void parallel_for(std::size_t count, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    if (count == 0) return;
    grain = std::max<std::size_t>(grain, 1);
    const int cap = g_inside_parallel ? 1 : max_threads();
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(cap), count / grain);
    if (workers <= 1) {
        fn(0, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            g_inside_parallel = true;
            fn(begin, end);
            g_inside_parallel = false;
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace gcnseg
