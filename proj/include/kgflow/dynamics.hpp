#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kgflow/currents.hpp"
#include "kgflow/parallel.hpp"

namespace kgflow {

/// Which curve parameter the samples carry: the per-particle parameter of the
/// autonomous field-line equation dX/dp = j(X), or the global parameter
/// shared by all particles under dX/dp = v(X_1, ..., X_n).
enum class Parameterization { Local, Nonlocal };

enum class StopReason {
    ParamLimit,      // ran to the requested parameter value
    TimeBoxExit,     // clipped where the time coordinate left [t0, t0 + T]
    Stagnation,      // |j| fell below the stagnation floor (local flow only)
    NodeTruncation,  // |psi|^2 fell below the node floor (nonlocal flow only)
};

const char* to_string(Parameterization p);
const char* to_string(StopReason r);

struct TrajectorySample {
    double param = 0.0;
    FourVector point;
};

/// Ordered polyline of one particle's spacetime curve. Params are strictly
/// increasing; consecutive points differ by less than the step-length cap in
/// force during integration. Spatial coordinates are not wrapped: the curve
/// lives in the periodic covering space, where the fields are periodic.
struct Trajectory {
    int particle = 0;
    Parameterization parameterization = Parameterization::Local;
    StopReason stop = StopReason::ParamLimit;
    std::vector<TrajectorySample> samples;
    double max_segment_length = 0.0;

    const FourVector& front() const { return samples.front().point; }
    const FourVector& back() const { return samples.back().point; }
};

struct FlowOptions {
    /// Max Euclidean length of one recorded segment; steps that overshoot are
    /// subdivided. 0 selects min(L, T) / 2.
    double step_length_cap = 0.0;
    /// Stagnation floor for the local integrator; 0 selects
    /// 1e-12 * amplitude bound of the field.
    double stagnation_epsilon = 0.0;
};

namespace detail {

struct StepControl {
    double cap = 0.0;
    double time_min = 0.0;
    double time_max = 0.0;
};

// One classical RK4 update; nullopt when any stage RHS is unavailable.
template <class Rhs>
std::optional<FourVector> rk4_step(Rhs&& rhs, const FourVector& x, double dp) {
    const auto k1 = rhs(x);
    if (!k1) return std::nullopt;
    const auto k2 = rhs(x + (dp / 2.0) * *k1);
    if (!k2) return std::nullopt;
    const auto k3 = rhs(x + (dp / 2.0) * *k2);
    if (!k3) return std::nullopt;
    const auto k4 = rhs(x + dp * *k3);
    if (!k4) return std::nullopt;
    return x + (dp / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
}

}  // namespace detail

/// Integrates dX/dp = rhs(X) from x0 with fixed-step RK4. The RHS returns
/// nullopt where it is undefined, which stops the trajectory with
/// `unavailable_reason`. Steps longer than the cap are subdivided; the
/// trajectory is clipped where the time coordinate leaves the box.
template <class Rhs>
Trajectory integrate_flow(Rhs&& rhs, const SpacetimeBox& box, const FourVector& x0,
                          double param_max, double dparam, double step_length_cap,
                          Parameterization tag, int particle, StopReason unavailable_reason) {
    if (!(dparam > 0.0)) throw std::invalid_argument("integration step must be positive");
    if (param_max < 0.0) throw std::invalid_argument("parameter span must be nonnegative");
    if (!box.contains_time(x0.t))
        throw std::invalid_argument("initial point lies outside the box time extent");

    Trajectory traj;
    traj.particle = particle;
    traj.parameterization = tag;
    traj.samples.push_back({0.0, x0});

    const double cap = step_length_cap > 0.0 ? step_length_cap : std::min(box.L, box.T) / 2.0;
    const double tiny = 1e-12 * dparam;

    double p = 0.0;
    FourVector x = x0;
    while (p < param_max - tiny) {
        const double dp = std::min(dparam, param_max - p);

        // Trial step, then halve until the recorded chords fit under the cap.
        std::vector<FourVector> pts;
        double max_len = 0.0;
        bool available = true;
        std::size_t substeps = 1;
        for (int attempt = 0; attempt < 24; ++attempt) {
            pts.clear();
            max_len = 0.0;
            available = true;
            FourVector cur = x;
            for (std::size_t i = 0; i < substeps; ++i) {
                const auto next = detail::rk4_step(rhs, cur, dp / static_cast<double>(substeps));
                if (!next) {
                    available = false;
                    break;
                }
                max_len = std::max(max_len, euclidean_norm(*next - cur));
                pts.push_back(*next);
                cur = *next;
            }
            if (!available || max_len <= cap) break;
            substeps *= 2;
        }

        // Record, clipping at the time-box faces.
        const double dp_sub = dp / static_cast<double>(substeps);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const FourVector& prev = traj.samples.back().point;
            const double p_prev = traj.samples.back().param;
            const FourVector& q = pts[i];
            if (!box.contains_time(q.t)) {
                const double bound = q.t > box.time_max() ? box.time_max() : box.time_min();
                const double denom = q.t - prev.t;
                const double lambda = denom != 0.0 ? (bound - prev.t) / denom : 0.0;
                if (lambda > 0.0) {
                    const FourVector clipped = prev + lambda * (q - prev);
                    traj.max_segment_length =
                        std::max(traj.max_segment_length, euclidean_norm(clipped - prev));
                    traj.samples.push_back({p_prev + lambda * dp_sub, clipped});
                }
                traj.stop = StopReason::TimeBoxExit;
                return traj;
            }
            traj.max_segment_length =
                std::max(traj.max_segment_length, euclidean_norm(q - prev));
            traj.samples.push_back({p + static_cast<double>(i + 1) * dp_sub, q});
        }
        if (!available) {
            traj.stop = unavailable_reason;
            return traj;
        }
        p += dp;
        x = pts.back();
    }
    traj.stop = StopReason::ParamLimit;
    return traj;
}

/// Field-line trajectory of one particle's conserved current, dX/ds = j(X).
/// Consumes only single-particle data by construction.
Trajectory integrate_local(const SingleParticleCurrentField& field, const FourVector& x0,
                           double s_max, double ds, const FlowOptions& options = {});

/// Joint trajectories of all particles under dX_a/ds = v_a(X_1, ..., X_n),
/// advanced synchronously on one s grid. Truncates (with NodeTruncation) when
/// the density falls below the node floor at any stage point; throws
/// node_error if the initial configuration is already at a node.
std::vector<Trajectory> integrate_nonlocal(const FlowField& flow, const Configuration& cfg0,
                                           double s_max, double ds,
                                           const FlowOptions& options = {});

/// Symmetric Hausdorff-style distance between two polylines after clipping
/// both to their common time interval; Euclidean metric on components.
/// Quantifies that two parameterizations trace the same spacetime curve.
double reparameterization_distance(const Trajectory& a, const Trajectory& b,
                                   Exec exec = Exec::Parallel);

/// Causal character of each polyline segment, with |s^2| within the band
/// classified as null.
std::vector<CausalClass> causal_character(const Trajectory& traj, double null_band = 1e-12);

}  // namespace kgflow
