#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace coulombflow {

// COULOMBFLOW_THREADS caps internal parallelism; unset means 1.
inline int thread_cap() {
    const char* env = std::getenv("COULOMBFLOW_THREADS");
    if (!env || !*env) return 1;
    try {
        return std::max(1, std::stoi(env));
    } catch (...) {
        return 1;
    }
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes
// only its own output slot, so results do not depend on the thread count.
// The first exception thrown by any task is rethrown.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

template <class F>
void parallel_for(std::size_t n, F&& fn) {
    parallel_for(n, thread_cap(), std::forward<F>(fn));
}

} // namespace coulombflow
