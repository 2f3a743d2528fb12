#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace orlimink {

/// Worker cap: ORLIMINK_THREADS when set to a positive integer, else the
/// hardware concurrency.
int worker_count();

/// Runs body(begin, end) over disjoint chunks of [0, n). Each index is written
/// by exactly one worker, so results do not depend on the worker count.
template <class Body>
void parallel_for(size_t n, Body&& body, size_t min_chunk = 4096) {
    const size_t workers = std::min<size_t>(static_cast<size_t>(worker_count()), (n + min_chunk - 1) / min_chunk);
    if (workers <= 1) {
        body(size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        const size_t b = w * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace orlimink
