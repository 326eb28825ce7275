#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace levlab {

/// Runs body(i) for i in [0, n) across hardware threads. Callers must write
/// results into per-index slots so output is independent of scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers < 2 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

}  // namespace levlab
