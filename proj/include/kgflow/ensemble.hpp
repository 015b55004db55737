#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgflow/currents.hpp"
#include "kgflow/errors.hpp"
#include "kgflow/marginals.hpp"
#include "kgflow/parallel.hpp"

namespace kgflow {

/// Metropolis random-walk settings. proposal_scale is the per-step standard
/// deviation as a fraction of the coordinate range: scale * T for time
/// coordinates, scale * L for spatial ones.
struct SamplerConfig {
    std::size_t n_samples = 10000;
    std::size_t burn_in = 2000;
    std::size_t thinning = 50;
    double proposal_scale = 0.1;
    std::uint64_t seed = 1;
};

/// Draws configurations from |psi|^2 over the 4n-dimensional box with a
/// Metropolis random walk: time coordinates confined to [t0, t0 + T]
/// (proposals outside are rejected), spatial coordinates wrapped mod L.
/// Deterministic given the seed. Requires a spacetime-normalized input;
/// throws sampler_error if the chain cannot move.
std::vector<Configuration> sample_initial(const MultiParticleWaveFunction& wf,
                                          const SamplerConfig& config);

struct PushForwardResult {
    std::vector<Configuration> survivors;     // endpoints, input order preserved
    std::vector<std::size_t> survivor_index;  // index into the input span
    std::size_t dropped_box_exit = 0;
    std::size_t dropped_node = 0;

    std::size_t total() const {
        return survivors.size() + dropped_box_exit + dropped_node;
    }
    double drop_fraction() const {
        const std::size_t t = total();
        return t == 0 ? 0.0
                      : static_cast<double>(dropped_box_exit + dropped_node) /
                            static_cast<double>(t);
    }
};

/// Advances every configuration to parameter s along the joint flow. Members
/// truncated at nodes or at the time-box faces are dropped and counted, never
/// fatal. Members are independent, so the parallel path is exact.
PushForwardResult push_forward(const FlowField& flow, std::span<const Configuration> samples,
                               double s, double ds, Exec exec = Exec::Parallel);

struct KsRecord {
    std::string coordinate;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct MomentRecord {
    std::string label;
    double sampled = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct DistributionReport {
    std::size_t total_samples = 0;
    std::size_t surviving = 0;
    std::size_t dropped_box_exit = 0;
    std::size_t dropped_node = 0;
    double drop_fraction = 0.0;
    double s = 0.0;
    double ds = 0.0;
    std::vector<std::array<double, 2>> time_windows;  // per particle, from survivors
    std::vector<KsRecord> ks;
    std::vector<MomentRecord> moments;
    bool pass = false;
};

/// Samples |psi|^2, pushes the ensemble forward by s, and compares the
/// surviving set against the exact |psi|^2 marginals restricted to the
/// surviving time windows: a one-sample KS test per coordinate (95% critical
/// value 1.36/sqrt(m)) plus first/second moments and cross-particle moments
/// at 4 standard errors. Throws inconclusive_error when more than 20% of the
/// members drop, or when any node drop occurs.
DistributionReport equivariance_test(const MultiParticleWaveFunction& wf,
                                     const SamplerConfig& sampler, double s, double ds,
                                     Exec exec = Exec::Parallel);

}  // namespace kgflow
