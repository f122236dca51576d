#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace atlasgeo::detail {

// Build parallelism is capped by ATLAS_GEO_THREADS (default: hardware
// concurrency). Results never depend on the thread count: each job index
// writes only its own slot.
inline unsigned thread_budget(size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned budget = hw;
    if (const char* env = std::getenv("ATLAS_GEO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) budget = static_cast<unsigned>(v);
    }
    if (budget > jobs) budget = static_cast<unsigned>(jobs);
    return budget == 0 ? 1 : budget;
}

template <typename F>
void parallel_for(size_t n, F&& body) {
    if (n == 0) return;
    const unsigned workers = thread_budget(n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const size_t lo = w * chunk;
        const size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace atlasgeo::detail
