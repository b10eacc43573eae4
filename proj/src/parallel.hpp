// Chunked parallel loop over independent work units. Each unit writes only
// its own preassigned slot, so results never depend on the thread count.
#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace marginvote::detail {

template <typename Fn>
void parallel_for(long long units, int threads, Fn&& fn) {
    if (threads <= 1 || units < 2) {
        for (long long i = 0; i < units; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(std::min<long long>(threads, units));
    const long long chunk = (units + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const long long begin = static_cast<long long>(w) * chunk;
        const long long end = std::min(units, begin + chunk);
        pool.emplace_back([&fn, begin, end] {
            for (long long i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace marginvote::detail
