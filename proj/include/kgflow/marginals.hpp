#pragma once

#include <array>
#include <vector>

#include "kgflow/wavefunction.hpp"

namespace kgflow {

/// Per-particle time windows [lo, hi] restricting the box in the time
/// direction; spatial directions always cover one full period.
struct TimeWindows {
    std::vector<std::array<double, 2>> windows;

    static TimeWindows full_box(const MultiParticleWaveFunction& wf);
    const std::array<double, 2>& of(int particle) const {
        return windows.at(static_cast<std::size_t>(particle));
    }
};

/// Exact marginal distribution of one coordinate of one particle under
/// |psi|^2, integrating all the other coordinates over the (time-windowed)
/// box by mode algebra. The result is a trigonometric polynomial, so the
/// CDF and the first two moments have closed forms.
///
/// Time coordinates come out exactly uniform on their window: integrating the
/// particle's own spatial coordinates over full periods forces equal momenta
/// and hence equal frequencies.
class CoordinateMarginal {
public:
    /// mu = 0 selects the time coordinate, 1..3 the spatial ones.
    static CoordinateMarginal build(const MultiParticleWaveFunction& wf, int particle, int mu,
                                    const TimeWindows& windows);

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double density(double xi) const;  // unnormalized
    double cdf(double xi) const;
    double mean() const;
    double variance() const;

    /// Integral of the unnormalized density over [lo, hi]; equals the
    /// restricted spacetime norm, identical across coordinates.
    double total() const { return total_; }

private:
    struct Harmonic {
        Complex amp;
        double omega;
    };

    double lo_ = 0.0, hi_ = 1.0;
    double constant_ = 0.0;
    std::vector<Harmonic> harmonics_;
    double total_ = 0.0;
};

/// Weight attached to one particle slot inside pair_expectation:
/// exp(i x_harmonic (2 pi / L) x_a) times t_a^t_power.
struct SlotWeight {
    int x_harmonic = 0;
    int t_power = 0;  // 0 or 1
};

/// Exact expectation integral of the product slot weight under the
/// unnormalized |psi|^2 over the windowed box. Dividing by the all-zero
/// weight value gives proper expectations; used for cross-particle moments.
Complex pair_expectation(const MultiParticleWaveFunction& wf, const TimeWindows& windows,
                         std::span<const SlotWeight> weights);

}  // namespace kgflow
