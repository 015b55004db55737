#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kgflow/wavefunction.hpp"

namespace kgflow {

/// One interference term of a single-particle current: a pair of wave
/// 4-vectors (k, k') from the same particle slot, so both sit on the same
/// mass shell. The field evaluates as
///   j^mu(x) = sum Re[amplitude * exp(i (k - k').x)] * (k + k')^mu / 2,
/// and each term is divergence-free because (k + k').(k - k') = m^2 - m^2.
struct PairTerm {
    Complex amplitude;  // conj(c_K) c_K' / sqrt(k0 V k0' V), spectators reduced
    FourVector k;
    FourVector k_prime;
    double mass = 0.0;  // shared slot mass
};

/// (k + k').(k - k') / 2 computed from the stored momenta.
double pair_divergence_factor(const PairTerm& term);

/// The same factor through the mass shell: (m^2 - m^2) / 2, identically zero.
double pair_divergence_factor_on_shell(const PairTerm& term);

/// Conserved 4-vector current of one particle, j_a^mu(x_a): the full current
/// tensor contracted over constant-time hypersurfaces of every other
/// particle. Spectator orthogonality leaves a field of x_a alone; the stored
/// representation groups terms by spectator mode tuple, which makes
/// evaluation O(#modes) while the explicit pair list stays available.
class SingleParticleCurrentField {
public:
    int particle() const { return particle_; }
    const SpacetimeBox& box() const { return box_; }

    /// j^mu(x), contravariant components.
    FourVector evaluate(const FourVector& x) const;

    /// Same field summed literally over the pair terms; O(#pairs) reference
    /// path for cross-checking the grouped evaluation.
    FourVector evaluate_pairwise(const FourVector& x) const;

    /// d_mu j^mu from the closed-form derivative, which carries the factor
    /// (k + k').(k - k') / 2 per term and therefore vanishes on shell.
    double divergence_analytic(const FourVector& x) const;

    /// Central finite-difference estimate of d_mu j^mu at step h.
    double divergence_fd(const FourVector& x, double h) const;

    const std::vector<PairTerm>& pair_terms() const { return pairs_; }

    /// Upper bound on |j| from the term amplitudes; scale for stagnation cuts.
    double amplitude_bound() const { return amplitude_bound_; }

private:
    friend SingleParticleCurrentField single_particle_current(
        const MultiParticleWaveFunction&, int);

    struct GroupMode {
        Complex coeff;  // c_K including the slot normalization 1/sqrt(k0 V)
        FourVector k;
    };

    int particle_ = 0;
    SpacetimeBox box_;
    std::vector<std::vector<GroupMode>> groups_;
    std::vector<PairTerm> pairs_;
    double amplitude_bound_ = 0.0;
};

SingleParticleCurrentField single_particle_current(const MultiParticleWaveFunction& wf,
                                                   int particle);

/// Full n-index current tensor at one configuration, components with all
/// indices lowered. Dense storage up to 3 particles; above that components
/// are computed per multi-index from the retained mode sums.
class CurrentTensor {
public:
    static constexpr int dense_particle_limit = 3;

    int particle_count() const { return n_; }
    bool is_dense() const { return !dense_.empty(); }

    /// Re j_{mu_1 ... mu_n}; `mu` holds one index in 0..3 per particle.
    double component(std::span<const int> mu) const;

    /// The raw complex mode sum behind component(); its imaginary part is a
    /// rounding residual.
    Complex component_complex(std::span<const int> mu) const;

    /// Largest |Im| over all components relative to the largest |Re|
    /// (dense storage only).
    double max_imag_ratio() const { return max_imag_ratio_; }

private:
    friend CurrentTensor current_tensor(const MultiParticleWaveFunction&,
                                        const Configuration&);

    struct PairEntry {
        Complex base;                          // conj(c_K u_K) c_K' u_K' product
        std::vector<FourVector> half_sum_low;  // (k + k')_mu / 2 per slot, lowered
    };

    std::vector<PairEntry> pairs_;
    int n_ = 0;
    std::vector<double> dense_;
    double max_imag_ratio_ = 0.0;
};

CurrentTensor current_tensor(const MultiParticleWaveFunction& wf, const Configuration& cfg);

/// Density floor below which velocities are treated as undefined:
/// 1e-12 times the box-averaged |psi|^2.
double node_threshold(const MultiParticleWaveFunction& wf);

/// All single-particle currents of one wave function plus the node threshold;
/// the evaluation context for velocities. Keeps a reference to the wave
/// function, which must outlive the field.
class FlowField {
public:
    explicit FlowField(const MultiParticleWaveFunction& wf);

    const MultiParticleWaveFunction& wave_function() const { return *wf_; }
    const SingleParticleCurrentField& current(int particle) const;
    double node_threshold() const { return node_eps_; }
    double density(const Configuration& cfg) const { return wf_->density(cfg); }

    /// v_a^mu = j_a^mu(x_a) / |psi(cfg)|^2, or nullopt below the node floor.
    std::optional<FourVector> try_velocity(const Configuration& cfg, int particle) const;

    /// Same, but throws node_error at nodes.
    FourVector velocity(const Configuration& cfg, int particle) const;

private:
    const MultiParticleWaveFunction* wf_;
    std::vector<SingleParticleCurrentField> currents_;
    double node_eps_ = 0.0;
};

/// One-shot v_a^mu; throws node_error below the node floor.
FourVector velocity_field(const MultiParticleWaveFunction& wf, const Configuration& cfg,
                          int particle);

/// Central finite-difference estimate of sum_a d_{a mu} (|psi|^2 v_a^mu) at
/// step h, evaluated through the literal density * velocity product. Throws
/// node_error when the h-neighborhood touches a node.
double continuity_residual(const FlowField& flow, const Configuration& cfg, double h);

}  // namespace kgflow
