#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace hessquot {

inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Static partition of [begin, end) into one contiguous chunk per thread.
/// chunk_fn(chunk_index, lo, hi) must only touch per-chunk state; callers merge
/// chunk results in index order so the outcome is independent of thread count.
inline void parallel_chunks(long long begin, long long end, int threads,
                            const std::function<void(int, long long, long long)>& chunk_fn) {
    const long long total = end - begin;
    if (total <= 0) return;
    const int t = std::min<long long>(resolve_thread_count(threads), total);
    if (t <= 1) {
        chunk_fn(0, begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    const long long base = total / t, rem = total % t;
    long long lo = begin;
    for (int c = 0; c < t; ++c) {
        const long long hi = lo + base + (c < rem ? 1 : 0);
        pool.emplace_back(chunk_fn, c, lo, hi);
        lo = hi;
    }
    for (auto& th : pool) th.join();
}

}  // namespace hessquot
