#include "kgflow/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace kgflow {

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("KS statistic of an empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

SampleMoments sample_moments(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("moments of an empty sample");
    const double n = static_cast<double>(sample.size());
    SampleMoments m;
    for (double v : sample) m.mean += v;
    m.mean /= n;
    for (double v : sample) {
        const double d = v - m.mean;
        m.variance += d * d;
        m.central4 += d * d * d * d;
    }
    m.variance /= n;
    m.central4 /= n;
    return m;
}

}  // namespace kgflow
