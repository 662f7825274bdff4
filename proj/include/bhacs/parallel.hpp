#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace bhacs {

namespace detail {
inline std::atomic<int>& thread_count() {
    static std::atomic<int> n{1};
    return n;
}
}  // namespace detail

inline void set_num_threads(int n) { detail::thread_count() = (n < 1) ? 1 : n; }
inline int num_threads() { return detail::thread_count().load(); }

// Run fn(i) for i in [begin,end), split into contiguous chunks across threads.
// Results written per-index are bit-identical for any thread count; reductions
// must go through a per-index buffer plus pairwise_sum to stay deterministic.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn) {
    const int nt = num_threads();
    if (nt <= 1 || end - begin < 2) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    const std::size_t total = end - begin;
    const std::size_t chunk = (total + nt - 1) / nt;
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = begin + chunk * t;
        if (lo >= end) break;
        const std::size_t hi = std::min(end, lo + chunk);
        workers.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& w : workers) w.join();
}

// Fixed-order pairwise summation: deterministic and far more accurate than a
// running sum for the ~10^6-term reductions used here.
inline double pairwise_sum(const double* p, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return v.empty() ? 0.0 : pairwise_sum(v.data(), v.size());
}

}  // namespace bhacs
