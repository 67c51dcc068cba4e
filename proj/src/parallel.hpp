/*
 Copyright 2026 The ofdm-pn Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef OFDMPN_PARALLEL_HPP
#define OFDMPN_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ofdmpn {

// Worker count: OFDM_PN_THREADS when set, hardware concurrency otherwise,
// never more than the item count.  Work is always partitioned by item
// index and merged in index order, so the result is identical for every
// worker count.
inline int worker_count(std::int64_t items) {
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
    if (const char* env = std::getenv("OFDM_PN_THREADS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested >= 1) workers = static_cast<int>(requested);
    }
    return static_cast<int>(
        std::min<std::int64_t>(workers, std::max<std::int64_t>(items, 1)));
}

// Runs fn(begin, end) over contiguous index chunks.
template <typename Fn>
void parallel_chunks(std::int64_t items, Fn&& fn) {
    const int workers = worker_count(items);
    if (workers <= 1) {
        fn(static_cast<std::int64_t>(0), items);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const std::int64_t chunk = (items + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t begin = w * chunk;
        const std::int64_t end = std::min(items, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace ofdmpn

#endif
