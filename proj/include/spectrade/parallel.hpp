#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spectrade {

// Runs body(0..count-1) across worker threads. Callers write results into
// preallocated per-index slots, so the outcome never depends on scheduling.
// workers <= 0 means one thread per hardware core.
inline void parallel_for(long long count, int workers,
                         const std::function<void(long long)>& body) {
    if (count <= 0) return;
    if (workers <= 0)
        workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (static_cast<long long>(workers) > count)
        workers = static_cast<int>(count);
    if (workers == 1) {
        for (long long i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<long long> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto drain = [&] {
        for (;;) {
            long long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (int w = 1; w < workers; ++w) threads.emplace_back(drain);
    drain();
    for (std::thread& thread : threads) thread.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace spectrade
