#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace leray::par {

/// Worker count used by parallel_for. 1 disables OpenMP entirely.
int thread_count();

/// Set the worker count (clamped to >= 1). Safe to call once at startup;
/// changing it mid-run does not change any computed value, only wall time.
void set_thread_count(int n);

/// Elementwise parallel loop. Every index is written by exactly one
/// iteration, so the result is independent of the schedule and thread count.
template <class F>
void parallel_for(std::int64_t n, F&& f) {
#ifdef _OPENMP
    if (thread_count() > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

namespace detail {
constexpr std::int64_t kChunk = 4096;
}

/// Sum of term(i) for i in [0, n). Partial sums are accumulated over fixed
/// 4096-element chunks and combined in index order, so the floating-point
/// result is identical for every thread count.
template <class F>
double deterministic_sum(std::int64_t n, F&& term) {
    if (n <= 0) return 0.0;
    const std::int64_t nchunks = (n + detail::kChunk - 1) / detail::kChunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
    parallel_for(nchunks, [&](std::int64_t c) {
        const std::int64_t lo = c * detail::kChunk;
        const std::int64_t hi = std::min(n, lo + detail::kChunk);
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(c)] = s;
    });
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

/// Max of term(i) for i in [0, n); order-independent. Returns 0 for n <= 0.
template <class F>
double deterministic_max(std::int64_t n, F&& term) {
    if (n <= 0) return 0.0;
    const std::int64_t nchunks = (n + detail::kChunk - 1) / detail::kChunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
    parallel_for(nchunks, [&](std::int64_t c) {
        const std::int64_t lo = c * detail::kChunk;
        const std::int64_t hi = std::min(n, lo + detail::kChunk);
        double m = term(lo);
        for (std::int64_t i = lo + 1; i < hi; ++i) m = std::max(m, term(i));
        partial[static_cast<std::size_t>(c)] = m;
    });
    double m = partial[0];
    for (double p : partial) m = std::max(m, p);
    return m;
}

/// Serial reference for deterministic_sum, kept for tests.
template <class F>
double serial_sum(std::int64_t n, F&& term) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += term(i);
    return s;
}

}  // namespace leray::par
