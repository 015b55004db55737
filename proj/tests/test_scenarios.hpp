#pragma once

// Reference wave functions shared by the unit and acceptance suites.

#include <cmath>
#include <complex>
#include <vector>

#include "kgflow/wavefunction.hpp"

namespace kgtest {

using kgflow::Complex;
using kgflow::MultiParticleWaveFunction;
using kgflow::SpacetimeBox;

inline SpacetimeBox unit_box(double T = 12.0) { return SpacetimeBox(2.0 * kgflow::pi, T); }

// n = 1, mass 1, rest mode only: uniform density, v = k.
inline MultiParticleWaveFunction single_mode(double T = 12.0) {
    return MultiParticleWaveFunction(unit_box(T), {1.0},
                                     {{Complex{1.0, 0.0}, {{0, 0, 0}}}});
}

// n = 1, equal superposition of the rest mode and one moving mode.
inline MultiParticleWaveFunction two_mode(double T = 12.0) {
    const double r = 1.0 / std::sqrt(2.0);
    return MultiParticleWaveFunction(unit_box(T), {1.0},
                                     {{Complex{r, 0.0}, {{0, 0, 0}}},
                                      {Complex{r, 0.0}, {{1, 0, 0}}}});
}

// n = 2 product of two single modes.
inline MultiParticleWaveFunction product_2p(double T = 12.0) {
    return MultiParticleWaveFunction(unit_box(T), {1.0, 1.0},
                                     {{Complex{1.0, 0.0}, {{0, 0, 0}, {1, 0, 0}}}});
}

// n = 2 entangled pair of product terms with swapped modes. Weights away from
// 1/2 keep the density bounded away from zero everywhere.
inline MultiParticleWaveFunction entangled_2p(double T = 60.0, double w1 = 0.9) {
    return MultiParticleWaveFunction(
        unit_box(T), {1.0, 1.0},
        {{Complex{std::sqrt(w1), 0.0}, {{0, 0, 0}, {1, 0, 0}}},
         {Complex{std::sqrt(1.0 - w1), 0.0}, {{1, 0, 0}, {0, 0, 0}}}});
}

// n = 2, five terms, unequal masses, complex coefficients.
inline MultiParticleWaveFunction five_term_2p(double T = 12.0) {
    return MultiParticleWaveFunction(
        SpacetimeBox(2.0 * kgflow::pi, T), {1.0, 1.3},
        {{Complex{0.5, 0.1}, {{0, 0, 0}, {0, 0, 0}}},
         {Complex{0.3, -0.2}, {{1, 0, 0}, {0, 1, 0}}},
         {Complex{-0.25, 0.15}, {{0, 1, 0}, {1, 0, 0}}},
         {Complex{0.2, 0.2}, {{1, 1, 0}, {0, 0, 1}}},
         {Complex{-0.1, 0.3}, {{0, 0, 1}, {1, -1, 0}}}});
}

// n = 1 superposition whose interference region drives j^0 below |j|,
// producing spacelike flow segments.
inline MultiParticleWaveFunction superluminal_probe(double T = 12.0) {
    const double r = 1.0 / std::sqrt(2.0);
    return MultiParticleWaveFunction(unit_box(T), {1.0},
                                     {{Complex{r, 0.0}, {{0, 0, 0}}},
                                      {Complex{r, 0.0}, {{2, 0, 0}}}});
}

// 7^3-mode Gaussian packet centered on momentum (10, 0, 0) with
// sigma_k = 0.1 |kbar| = one lattice spacing; position centered at x0.
// KG-normalized. sigma_x = 1 / (2 sigma_k) = 0.5.
inline MultiParticleWaveFunction gaussian_packet(double T = 6.0) {
    const SpacetimeBox box(2.0 * kgflow::pi, T);
    const double mass = 10.0;
    const int center = 10;
    const double sigma_k = 1.0;
    const double x0[3] = {kgflow::pi, kgflow::pi, kgflow::pi};
    std::vector<MultiParticleWaveFunction::TermInput> terms;
    for (int dx = -3; dx <= 3; ++dx) {
        for (int dy = -3; dy <= 3; ++dy) {
            for (int dz = -3; dz <= 3; ++dz) {
                const double kx = static_cast<double>(center + dx);
                const double ky = static_cast<double>(dy);
                const double kz = static_cast<double>(dz);
                const double d2 = static_cast<double>(dx * dx + dy * dy + dz * dz);
                const double weight = std::exp(-d2 / (4.0 * sigma_k * sigma_k));
                const double phase = -(kx * x0[0] + ky * x0[1] + kz * x0[2]);
                terms.push_back({weight * Complex{std::cos(phase), std::sin(phase)},
                                 {{center + dx, dy, dz}}});
            }
        }
    }
    return MultiParticleWaveFunction(box, {mass}, terms).normalized_kg();
}

}  // namespace kgtest
