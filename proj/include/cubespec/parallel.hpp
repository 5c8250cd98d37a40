#pragma once
#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cubespec {

inline int hardware_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? static_cast<int>(n) : 1;
}

// Worker count resolution: explicit request wins, then the CUBESPEC_WORKERS
// environment variable, then hardware concurrency.
inline int default_workers(int requested = 0) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("CUBESPEC_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0 && v <= 4096)
            return static_cast<int>(v);
    }
    return hardware_workers();
}

// Splits [0, total) into fixed chunks handed out through an atomic counter.
// Each worker accumulates into its own State; the returned states are merged
// by the caller.  With integer accumulators and per-index derived randomness
// the merged result is independent of the worker count and of chunk
// scheduling order.
template <class State, class PerRange>
std::vector<State> parallel_ranges(std::uint64_t total, std::uint64_t chunk, int workers, PerRange f) {
    workers = std::max(1, workers);
    if (chunk == 0)
        chunk = 1;
    std::vector<State> states(static_cast<size_t>(workers));
    std::atomic<std::uint64_t> cursor{0};
    auto body = [&](int w) {
        for (;;) {
            std::uint64_t begin = cursor.fetch_add(chunk, std::memory_order_relaxed);
            if (begin >= total)
                break;
            f(states[static_cast<size_t>(w)], begin, std::min(begin + chunk, total));
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(body, w);
        for (auto& t : pool)
            t.join();
    }
    return states;
}

} // namespace cubespec
