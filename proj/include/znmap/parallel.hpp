#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace znmap::detail {

/// Runs body(row) for every row in [0, rows), splitting contiguous row blocks
/// across up to `threads` workers. Each row is handled by exactly one call, so
/// results written per row are independent of the partitioning.
template <class Body>
void for_each_row(std::size_t rows, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(rows, 1)));
    if (threads <= 1) {
        for (std::size_t r = 0; r < rows; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t block = (rows + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * block;
        const std::size_t hi = std::min(rows, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t r = lo; r < hi; ++r) body(r);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace znmap::detail
