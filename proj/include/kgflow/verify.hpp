#pragma once

#include <cstdint>
#include <vector>

#include "kgflow/report.hpp"
#include "kgflow/scenario.hpp"

namespace kgflow {

/// Tolerances for the deterministic invariant suite. `strict` divides the
/// finite-difference and identity tolerances by 10; statistical thresholds
/// are distribution-fixed and stay put.
struct ToleranceProfile {
    double kg_residual = 1e-4;         // (box d'Alembertian + m^2) psi, FD at h = 1e-3
    double norm_invariance = 1e-12;    // KG norm across hypersurface time tuples
    double divergence_identity = 1e-12;  // on-shell pair factor through the momenta
    double divergence_analytic = 1e-12;  // closed-form divergence of j_a
    double divergence_fd = 1e-6;       // FD divergence of j_a at h = 1e-4
    double continuity = 1e-8;          // FD continuity residual at h = 1e-3
    double tensor_imag = 1e-12;        // tensor imaginary part, relative
    double reconstruction = 1e-12;     // v * |psi|^2 versus j, relative
    double reparam_distance = 1e-6;    // local versus nonlocal curve distance
    double self_convergence = 1e-7;    // endpoint shift under ds halving

    static ToleranceProfile defaults() { return {}; }
    static ToleranceProfile strict();
};

/// Runs the deterministic invariant checks of one scenario. Each check yields
/// one record; nothing throws on a failed check. Trajectory checks run only
/// when the scenario provides an initial configuration with s_max and ds; the
/// equivariance Monte Carlo runs only when include_equivariance is set.
std::vector<CheckRecord> run_verification(const Scenario& scenario,
                                          const ToleranceProfile& profile, std::uint64_t seed,
                                          bool include_equivariance, Exec exec);

/// Uniformly random configurations in the box, deterministic in the seed.
std::vector<Configuration> random_configurations(const SpacetimeBox& box, int particles,
                                                 std::size_t count, std::uint64_t seed);

}  // namespace kgflow
