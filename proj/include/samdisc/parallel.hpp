#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace samdisc {

inline unsigned effective_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs body(chunk_index, begin, end) over [0, n) split into fixed chunks.
// Chunk boundaries depend only on (n, chunk_count), never on the thread
// count, so callers that accumulate per-chunk results and combine them in
// chunk order get identical answers for any --threads value.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunk_count, unsigned threads, Body&& body) {
    if (n == 0) return;
    chunk_count = std::max<std::size_t>(1, std::min(chunk_count, n));
    const std::size_t base = n / chunk_count, rem = n % chunk_count;
    auto chunk_range = [&](std::size_t c) {
        std::size_t b = c * base + std::min(c, rem);
        std::size_t e = b + base + (c < rem ? 1 : 0);
        return std::pair<std::size_t, std::size_t>(b, e);
    };

    unsigned workers = std::min<unsigned>(effective_threads(threads), static_cast<unsigned>(chunk_count));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunk_count; ++c) {
            auto [b, e] = chunk_range(c);
            body(c, b, e);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= chunk_count) return;
            auto [b, e] = chunk_range(c);
            body(c, b, e);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

} // namespace samdisc
