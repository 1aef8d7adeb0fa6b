#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace bolab {

// Worker count for sweep orchestration: BO_LAB_THREADS when set (clamped to
// [1, 64]), otherwise the hardware count capped at 8. Each swept task is
// internally deterministic and writes to its own slot, so scheduling never
// changes results.
inline int thread_budget() {
    if (const char* env = std::getenv("BO_LAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<int>(v > 64 ? 64 : v);
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(hw > 8 ? 8 : hw);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions from
// workers are rethrown (first one wins) after all workers join.
template <typename F>
void parallel_for_n(int n, int threads, F&& fn) {
    if (n <= 0) return;
    if (threads > n) threads = n;
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace bolab
