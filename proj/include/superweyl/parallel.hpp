#pragma once

// Static partition of [0, count) over worker threads. Each index is handled by
// exactly one worker, so results do not depend on the thread count. The first
// exception thrown by any worker is rethrown on the calling thread.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace superweyl {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i, std::size_t{0});
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t begin = count * w / workers, end = count * (w + 1) / workers;
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i, w);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline std::size_t worker_count(std::size_t count, int threads) {
    return std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count));
}

} // namespace superweyl
