#pragma once

#include <array>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "kgflow/mode.hpp"

namespace kgflow {

using Complex = std::complex<double>;

/// One point per particle: (x_1, ..., x_n) in the box chart.
struct Configuration {
    std::vector<FourVector> points;

    Configuration() = default;
    explicit Configuration(std::vector<FourVector> p) : points(std::move(p)) {}

    std::size_t size() const { return points.size(); }
    FourVector& operator[](std::size_t a) { return points[a]; }
    const FourVector& operator[](std::size_t a) const { return points[a]; }
};

/// Exact n-particle wave function: a finite superposition of products of
/// positive-frequency plane-wave modes, one mode per particle and term.
///
/// Mode convention: u_k(x) = exp(-i k.x) / sqrt(k0 V), with k.x the Minkowski
/// product and V = L^3. On the box the modes are orthonormal under the
/// constant-t Klein-Gordon pairing, so the KG norm is simply sum |c_K|^2.
///
/// Immutable after construction; evaluation is pure and reentrant.
class MultiParticleWaveFunction {
public:
    struct Term {
        Complex coeff;
        std::vector<Mode> modes;          // one per particle slot
        std::vector<FourVector> momenta;  // cached on-shell momenta
        double norm = 1.0;                // prod_a 1 / sqrt(k0_a V)
    };

    /// Coefficient plus one integer momentum triple per particle.
    using TermInput = std::pair<Complex, std::vector<std::array<int, 3>>>;

    /// Duplicate mode tuples are merged by coefficient addition; terms that
    /// cancel to zero are dropped. Throws std::invalid_argument when masses
    /// are negative, arities disagree, or everything cancels.
    MultiParticleWaveFunction(const SpacetimeBox& box, std::vector<double> masses,
                              const std::vector<TermInput>& terms);

    int particle_count() const { return n_; }
    const SpacetimeBox& box() const { return box_; }
    const std::vector<Term>& terms() const { return terms_; }
    double mass(int particle) const { return masses_.at(static_cast<std::size_t>(particle)); }
    const std::vector<double>& masses() const { return masses_; }

    /// psi(x_1, ..., x_n).
    Complex evaluate(const Configuration& cfg) const;

    /// d psi / d x_a^mu for mu = 0..3, i.e. the literal partial derivatives
    /// with respect to (t, x, y, z) of particle `particle` (lower index).
    std::array<Complex, 4> gradient(const Configuration& cfg, int particle) const;

    /// |psi|^2 at the configuration.
    double density(const Configuration& cfg) const;

    /// Klein-Gordon norm with all hypersurfaces at t = 0: sum_K |c_K|^2
    /// under the mode convention above.
    double kg_norm() const { return kg_norm_; }

    /// KG norm evaluated as the explicit mode sum with the constant-time
    /// hypersurface of particle a placed at times[a]. Box orthogonality makes
    /// the result independent of the times; this entry point exists so that
    /// independence can be checked rather than assumed.
    double kg_norm_at_times(std::span<const double> times) const;

    /// N = integral of |psi|^2 over the full 4n-dimensional box, evaluated
    /// by exact mode sums (closed-form time antiderivatives, spatial
    /// orthogonality kills cross terms).
    double spacetime_norm() const { return spacetime_norm_; }

    /// Box-averaged |psi|^2, i.e. N / (V T)^n. Sets the scale for node
    /// detection thresholds.
    double mean_density() const;

    /// Rescaled copy with kg_norm() == 1.
    MultiParticleWaveFunction normalized_kg() const;

    /// Rescaled copy with spacetime_norm() == 1.
    MultiParticleWaveFunction normalized_spacetime() const;

private:
    MultiParticleWaveFunction scaled(double factor) const;
    void check_arity(const Configuration& cfg) const;

    SpacetimeBox box_;
    int n_ = 0;
    std::vector<double> masses_;
    std::vector<Term> terms_;
    double kg_norm_ = 0.0;
    double spacetime_norm_ = 0.0;
};

/// Integral of exp(i dk0 t) over [t0, t0 + T]; exact antiderivative, with the
/// dk0 == 0 branch returning T.
Complex box_time_integral(double dk0, double t0, double T);

}  // namespace kgflow
