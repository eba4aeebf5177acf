#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace kvforge {

namespace detail {
inline std::atomic<int>& thread_limit_storage() {
    static std::atomic<int> limit{-1};
    return limit;
}
}  // namespace detail

// Worker bound for solver-internal parallelism. Taken from the
// KVFORGE_THREADS environment variable on first use; 0 or unset means
// hardware concurrency. Tests may override via set_thread_limit.
inline int thread_limit() {
    int v = detail::thread_limit_storage().load();
    if (v >= 0) return v == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : v;
    int parsed = 0;
    if (const char* env = std::getenv("KVFORGE_THREADS")) parsed = std::atoi(env);
    if (parsed < 0) parsed = 0;
    detail::thread_limit_storage().store(parsed);
    return parsed == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : parsed;
}

inline void set_thread_limit(int n) { detail::thread_limit_storage().store(n < 0 ? 0 : n); }

// Runs f(i) for i in [0, n). Each index writes only its own preallocated
// slot on the caller side, so the result is identical for any schedule
// or worker count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    int workers = thread_limit();
    if (workers < 1) workers = 1;
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    f(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(error);
}

}  // namespace kvforge
