#ifndef RABISIM_PARALLEL_HPP
#define RABISIM_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rabisim {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) on a pool of `threads` workers. Work items are
/// handed out through an atomic counter; fn must write its result into a slot
/// owned by index i so the outcome is independent of the schedule. The first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for_indexed(int n, int threads, Fn&& fn) {
    threads = std::min(resolve_threads(threads), n);
    if (n <= 0) return;
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Fixed-size blocking of [0, n): block b covers [b*block, min((b+1)*block, n)).
/// The block size is a constant of the algorithm (never derived from the
/// thread count), so per-block partial results reduced in block order give
/// bitwise identical totals for any number of workers.
struct BlockRange {
    int begin;
    int end;
};

inline int block_count(int n, int block) { return (n + block - 1) / block; }

inline BlockRange block_range(int b, int n, int block) {
    const int lo = b * block;
    return {lo, std::min(lo + block, n)};
}

} // namespace rabisim

#endif
