#pragma once

#include <array>
#include <cmath>

#include "kgflow/box.hpp"

namespace kgflow {

/// One positive-frequency plane-wave mode on the box, keyed by integer
/// momentum quantum numbers. Spatial momentum is k = (2 pi / L) n and the
/// energy is fixed on the mass shell, k0 = +sqrt(|k|^2 + m^2) > 0.
struct Mode {
    std::array<int, 3> n{0, 0, 0};
    double mass = 0.0;

    friend bool operator==(const Mode& a, const Mode& b) {
        return a.n == b.n && a.mass == b.mass;
    }
};

inline FourVector mode_momentum(const Mode& mode, const SpacetimeBox& box) {
    const double unit = 2.0 * pi / box.L;
    const double kx = unit * mode.n[0];
    const double ky = unit * mode.n[1];
    const double kz = unit * mode.n[2];
    const double k0 = std::sqrt(kx * kx + ky * ky + kz * kz + mode.mass * mode.mass);
    return {k0, kx, ky, kz};
}

}  // namespace kgflow
