#pragma once

// Independent numerical oracles for the test suites: plain finite differences
// and uniform-grid quadrature, written against the public evaluation API only.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "kgflow/wavefunction.hpp"

namespace kgtest {

using kgflow::Complex;
using kgflow::Configuration;
using kgflow::FourVector;

// (f(x+h) - f(x-h)) / 2h along one coordinate of one particle.
inline Complex central_diff(const std::function<Complex(const Configuration&)>& f,
                            const Configuration& cfg, int particle, int mu, double h) {
    Configuration plus = cfg, minus = cfg;
    plus[static_cast<std::size_t>(particle)][static_cast<std::size_t>(mu)] += h;
    minus[static_cast<std::size_t>(particle)][static_cast<std::size_t>(mu)] -= h;
    return (f(plus) - f(minus)) / (2.0 * h);
}

inline Complex second_diff(const std::function<Complex(const Configuration&)>& f,
                           const Configuration& cfg, int particle, int mu, double h) {
    Configuration plus = cfg, minus = cfg;
    plus[static_cast<std::size_t>(particle)][static_cast<std::size_t>(mu)] += h;
    minus[static_cast<std::size_t>(particle)][static_cast<std::size_t>(mu)] -= h;
    return (f(plus) - 2.0 * f(cfg) + f(minus)) / (h * h);
}

// Finite-difference (box d'Alembertian + m^2) psi for one particle.
inline double kg_residual_oracle(const kgflow::MultiParticleWaveFunction& wf,
                                 const Configuration& cfg, int particle, double h) {
    const auto f = [&](const Configuration& c) { return wf.evaluate(c); };
    Complex acc = wf.mass(particle) * wf.mass(particle) * wf.evaluate(cfg);
    for (int mu = 0; mu < 4; ++mu) {
        const Complex d2 = second_diff(f, cfg, particle, mu, h);
        acc += (mu == 0 ? d2 : -d2);
    }
    return std::abs(acc);
}

// Midpoint Riemann sum of `f` over the 4n-dimensional box with `per_axis`
// points along every coordinate.
inline double box_quadrature(const kgflow::MultiParticleWaveFunction& wf, int per_axis,
                             const std::function<double(const Configuration&)>& f) {
    const auto& box = wf.box();
    const int n = wf.particle_count();
    const int dims = 4 * n;
    std::size_t count = 1;
    for (int d = 0; d < dims; ++d) count *= static_cast<std::size_t>(per_axis);
    double cell = 1.0;
    for (int a = 0; a < n; ++a) cell *= box.four_volume();
    cell /= static_cast<double>(count);

    double sum = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(dims), 0);
    Configuration cfg;
    cfg.points.resize(static_cast<std::size_t>(n));
    for (std::size_t flat = 0; flat < count; ++flat) {
        std::size_t rem = flat;
        for (int d = 0; d < dims; ++d) {
            idx[static_cast<std::size_t>(d)] = static_cast<int>(rem % static_cast<std::size_t>(per_axis));
            rem /= static_cast<std::size_t>(per_axis);
        }
        for (int a = 0; a < n; ++a) {
            const double ft = (idx[static_cast<std::size_t>(4 * a)] + 0.5) / per_axis;
            cfg[static_cast<std::size_t>(a)].t = box.time_min() + box.T * ft;
            for (int mu = 1; mu < 4; ++mu) {
                const double fx = (idx[static_cast<std::size_t>(4 * a + mu)] + 0.5) / per_axis;
                cfg[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu)] =
                    box.origin[static_cast<std::size_t>(mu)] + box.L * fx;
            }
        }
        sum += f(cfg) * cell;
    }
    return sum;
}

inline std::vector<Configuration> random_box_configs(const kgflow::SpacetimeBox& box, int n,
                                                     std::size_t count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Configuration> out;
    for (std::size_t i = 0; i < count; ++i) {
        Configuration cfg;
        cfg.points.resize(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
            cfg[static_cast<std::size_t>(a)].t = box.time_min() + box.T * u01(rng);
            for (std::size_t mu = 1; mu < 4; ++mu)
                cfg[static_cast<std::size_t>(a)][mu] = box.origin[mu] + box.L * u01(rng);
        }
        out.push_back(std::move(cfg));
    }
    return out;
}

}  // namespace kgtest
