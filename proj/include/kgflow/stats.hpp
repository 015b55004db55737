#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kgflow {

/// One-sample Kolmogorov-Smirnov statistic sup_x |F_n(x) - F(x)| against a
/// reference CDF. The sample is copied and sorted internally.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Asymptotic critical value c / sqrt(n). c = 1.36 is the conventional 95%
/// constant, c = 1.63 the 99% one.
inline double ks_critical(std::size_t n, double c) { return c / std::sqrt(static_cast<double>(n)); }

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // population normalization (1/n)
    double central4 = 0.0;
};

SampleMoments sample_moments(std::span<const double> sample);

}  // namespace kgflow
