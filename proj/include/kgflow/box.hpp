#pragma once

#include <cmath>
#include <stdexcept>

#include "kgflow/four_vector.hpp"

namespace kgflow {

/// Finite spacetime box: spatially periodic with one period L on all three
/// axes, and a finite time extent T. The box frame is the preferred chart;
/// every hypersurface integral in this project is taken on a constant-t slice
/// of this frame.
struct SpacetimeBox {
    double L = 2.0 * pi;  // spatial period per axis
    double T = 1.0;       // time extent
    FourVector origin{};

    SpacetimeBox() = default;
    SpacetimeBox(double period, double time_extent, FourVector orig = {})
        : L(period), T(time_extent), origin(orig) {
        if (!(L > 0.0)) throw std::invalid_argument("SpacetimeBox: spatial period must be positive");
        if (!(T > 0.0)) throw std::invalid_argument("SpacetimeBox: time extent must be positive");
    }

    double volume() const { return L * L * L; }
    double four_volume() const { return volume() * T; }

    double time_min() const { return origin.t; }
    double time_max() const { return origin.t + T; }
    bool contains_time(double t) const { return t >= time_min() && t <= time_max(); }

    /// Wraps spatial components into [origin, origin + L) per axis; time is
    /// left untouched (the time box is not a periodic identification).
    FourVector wrap_spatial(FourVector p) const {
        for (std::size_t mu = 1; mu < 4; ++mu) {
            const double rel = p[mu] - origin[mu];
            p[mu] = rel - L * std::floor(rel / L) + origin[mu];
        }
        return p;
    }
};

}  // namespace kgflow
