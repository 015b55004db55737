#include <cmath>
#include <vector>

#include "doctest.h"
#include "kgflow/parallel.hpp"

using namespace kgflow;

TEST_CASE("parallel kernels reproduce the serial reference bitwise") {
    const std::size_t n = 30000;
    const auto term = [](std::size_t i) {
        const double x = 0.37 * static_cast<double>(i % 977) + 1e-9 * static_cast<double>(i);
        return std::sin(x) / (1.0 + x);
    };

    SUBCASE("chunked_sum") {
        CHECK(chunked_sum(n, Exec::Serial, term) == chunked_sum(n, Exec::Parallel, term));
        CHECK(chunked_sum(0, Exec::Parallel, term) == 0.0);
        CHECK(chunked_sum(3, Exec::Parallel, term) ==
              doctest::Approx(term(0) + term(1) + term(2)).epsilon(1e-15));
    }
    SUBCASE("chunked_max") {
        CHECK(chunked_max(n, Exec::Serial, term) == chunked_max(n, Exec::Parallel, term));
        CHECK(chunked_max(1, Exec::Parallel, term) == term(0));
    }
    SUBCASE("parallel_for writes disjoint slots identically") {
        std::vector<double> a(n), b(n);
        parallel_for(n, Exec::Serial, [&](std::size_t i) { a[i] = term(i); });
        parallel_for(n, Exec::Parallel, [&](std::size_t i) { b[i] = term(i); });
        CHECK(a == b);
    }
    SUBCASE("sum is independent of the thread count by chunk construction") {
        // Deliberately non-associative-friendly magnitudes.
        const auto spiky = [](std::size_t i) {
            return (i % 2 == 0 ? 1.0e16 : -1.0e16) + static_cast<double>(i % 17);
        };
        CHECK(chunked_sum(n, Exec::Serial, spiky) == chunked_sum(n, Exec::Parallel, spiky));
    }
}
