#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace wntv {

// Runs fn(i) for i in [begin, end) over up to num_threads workers.
// num_threads <= 0 picks hardware_concurrency. Work items must write to
// disjoint state; the first exception thrown by any worker is rethrown.
inline void parallel_for(int begin, int end, int num_threads,
                         const std::function<void(int)>& fn) {
    const int n = end - begin;
    if (n <= 0) return;
    if (num_threads <= 0) {
        num_threads = static_cast<int>(std::thread::hardware_concurrency());
        if (num_threads <= 0) num_threads = 1;
    }
    num_threads = std::min(num_threads, n);
    if (num_threads == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }

    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(num_threads));
    const int chunk = (n + num_threads - 1) / num_threads;
    for (int t = 0; t < num_threads; ++t) {
        const int lo = begin + t * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, t, &fn, &errors] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace wntv
