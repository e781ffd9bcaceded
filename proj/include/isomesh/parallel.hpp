#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace isomesh {

/// Number of workers to use for `threads` requested (0 means auto).
inline unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(begin, end) over [0, n) in fixed-size chunks pulled from an atomic
/// counter. Chunk boundaries depend only on n and chunk, never on the worker
/// count, so any per-chunk results a caller collects can be reduced in chunk
/// order to give output independent of the thread count.
inline void parallel_chunks(std::size_t n, std::size_t chunk, unsigned threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    unsigned workers = resolve_threads(threads);
    std::size_t nchunks = (n + chunk - 1) / chunk;
    if (workers <= 1 || nchunks <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    if (workers > nchunks) workers = unsigned(nchunks);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= nchunks) break;
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

}  // namespace isomesh
