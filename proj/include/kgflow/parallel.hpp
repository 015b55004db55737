#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kgflow {

/// Execution policy for the data-parallel kernels below. Every kernel has a
/// serial reference path; the parallel path is bit-identical to it.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs body(i) for i in [0, n). Iterations must touch disjoint state.
template <class Body>
void parallel_for(std::size_t n, Exec exec, Body&& body) {
#ifdef _OPENMP
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

namespace detail {
inline constexpr std::size_t kernel_chunk = 4096;
}

/// Sum of term(i) over [0, n). Accumulation order is fixed by a constant chunk
/// size, independent of the thread count, so results are reproducible.
template <class Term>
double chunked_sum(std::size_t n, Exec exec, Term&& term) {
    const std::size_t chunk = detail::kernel_chunk;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(n_chunks, 0.0);
    parallel_for(n_chunks, exec, [&](std::size_t c) {
        const std::size_t lo = c * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[c] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

/// Max of term(i) over [0, n); exact for any evaluation order.
template <class Term>
double chunked_max(std::size_t n, Exec exec, Term&& term) {
    const std::size_t chunk = detail::kernel_chunk;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(n_chunks, 0.0);
    parallel_for(n_chunks, exec, [&](std::size_t c) {
        const std::size_t lo = c * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        double acc = lo < hi ? term(lo) : 0.0;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            const double v = term(i);
            if (v > acc) acc = v;
        }
        partial[c] = acc;
    });
    double best = partial.empty() ? 0.0 : partial[0];
    for (double p : partial)
        if (p > best) best = p;
    return best;
}

}  // namespace kgflow
