#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace htgame {

// Static block partition over [0, count). Workers write to disjoint
// preallocated slots, so results never depend on the schedule.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(std::min<std::int64_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&fn, w, workers, count] {
            for (std::int64_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace htgame
