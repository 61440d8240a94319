#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace akbeam {

/// Applies fn(i) for i in [0, n) on up to `threads` workers. Results must be
/// written into index-addressed slots by the caller, so the outcome is
/// independent of the worker count. The first exception wins and is rethrown
/// on the calling thread.
template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    auto worker = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n) return;
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (error) return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(std::min<long>(threads, n));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace akbeam
