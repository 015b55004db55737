#pragma once

#include <cmath>
#include <cstddef>

namespace kgflow {

inline constexpr double pi = 3.14159265358979323846;

/// Minkowski 4-vector, signature (+,-,-,-), natural units (hbar = c = 1).
/// Index 0 is the time component, 1..3 are x, y, z.
struct FourVector {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double operator[](std::size_t mu) const {
        switch (mu) {
            case 0: return t;
            case 1: return x;
            case 2: return y;
            default: return z;
        }
    }
    double& operator[](std::size_t mu) {
        switch (mu) {
            case 0: return t;
            case 1: return x;
            case 2: return y;
            default: return z;
        }
    }

    FourVector& operator+=(const FourVector& o) {
        t += o.t; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    FourVector& operator-=(const FourVector& o) {
        t -= o.t; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    FourVector& operator*=(double s) {
        t *= s; x *= s; y *= s; z *= s;
        return *this;
    }

    friend FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
    friend FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
    friend FourVector operator*(double s, FourVector v) { return v *= s; }
    friend FourVector operator*(FourVector v, double s) { return v *= s; }
};

inline double minkowski_dot(const FourVector& a, const FourVector& b) {
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

/// Flips the sign of the spatial components: lowers (or raises) the index.
inline FourVector flip_spatial(const FourVector& v) { return {v.t, -v.x, -v.y, -v.z}; }

/// Plain component-wise length. Step-size control and convergence metrics,
/// not geometry.
inline double euclidean_norm(const FourVector& v) {
    return std::sqrt(v.t * v.t + v.x * v.x + v.y * v.y + v.z * v.z);
}

inline double spatial_norm2(const FourVector& v) {
    return v.x * v.x + v.y * v.y + v.z * v.z;
}

enum class CausalClass { Timelike, Null, Spacelike };

/// Sign of the Minkowski interval of dx, with |s^2| <= null_band treated as null.
inline CausalClass classify_interval(const FourVector& dx, double null_band = 1e-12) {
    const double s2 = minkowski_dot(dx, dx);
    if (s2 > null_band) return CausalClass::Timelike;
    if (s2 < -null_band) return CausalClass::Spacelike;
    return CausalClass::Null;
}

inline const char* to_string(CausalClass c) {
    switch (c) {
        case CausalClass::Timelike: return "timelike";
        case CausalClass::Null: return "null";
        default: return "spacelike";
    }
}

}  // namespace kgflow
