#include "kgflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kgflow/dynamics.hpp"
#include "kgflow/stats.hpp"

namespace kgflow {

ToleranceProfile ToleranceProfile::strict() {
    ToleranceProfile p;
    p.kg_residual /= 10.0;
    p.divergence_identity /= 10.0;
    p.divergence_analytic /= 10.0;
    p.divergence_fd /= 10.0;
    p.continuity /= 10.0;
    p.reparam_distance /= 10.0;
    p.self_convergence /= 10.0;
    return p;
}

std::vector<Configuration> random_configurations(const SpacetimeBox& box, int particles,
                                                 std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Configuration> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Configuration cfg;
        cfg.points.resize(static_cast<std::size_t>(particles));
        for (int a = 0; a < particles; ++a) {
            cfg[static_cast<std::size_t>(a)].t = box.time_min() + box.T * u01(rng);
            for (std::size_t mu = 1; mu < 4; ++mu)
                cfg[static_cast<std::size_t>(a)][mu] = box.origin[mu] + box.L * u01(rng);
        }
        out.push_back(std::move(cfg));
    }
    return out;
}

namespace {

// Second-order central estimate of (box d'Alembertian + m^2) psi for one
// particle; the exact value is identically zero for on-shell modes.
double kg_residual_fd(const MultiParticleWaveFunction& wf, const Configuration& cfg,
                      int particle, double h) {
    const Complex center = wf.evaluate(cfg);
    Complex acc = wf.mass(particle) * wf.mass(particle) * center;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        Configuration plus = cfg, minus = cfg;
        plus[static_cast<std::size_t>(particle)][mu] += h;
        minus[static_cast<std::size_t>(particle)][mu] -= h;
        const Complex second =
            (wf.evaluate(plus) - 2.0 * center + wf.evaluate(minus)) / (h * h);
        acc += (mu == 0 ? second : -second);
    }
    return std::abs(acc);
}

struct DivergenceGrid {
    const SpacetimeBox* box;
    int spatial = 6;
    int temporal = 3;

    std::size_t size() const {
        return static_cast<std::size_t>(temporal) * static_cast<std::size_t>(spatial) *
               static_cast<std::size_t>(spatial) * static_cast<std::size_t>(spatial);
    }
    FourVector point(std::size_t flat) const {
        const std::size_t g = static_cast<std::size_t>(spatial);
        const std::size_t iz = flat % g;
        const std::size_t iy = (flat / g) % g;
        const std::size_t ix = (flat / (g * g)) % g;
        const std::size_t it = flat / (g * g * g);
        FourVector p;
        p.t = box->time_min() + (static_cast<double>(it) + 0.5) * box->T /
                                    static_cast<double>(temporal);
        p.x = box->origin.x + (static_cast<double>(ix) + 0.5) * box->L / static_cast<double>(g);
        p.y = box->origin.y + (static_cast<double>(iy) + 0.5) * box->L / static_cast<double>(g);
        p.z = box->origin.z + (static_cast<double>(iz) + 0.5) * box->L / static_cast<double>(g);
        return p;
    }
};

}  // namespace

std::vector<CheckRecord> run_verification(const Scenario& scenario,
                                          const ToleranceProfile& profile, std::uint64_t seed,
                                          bool include_equivariance, Exec exec) {
    std::vector<CheckRecord> records;
    const MultiParticleWaveFunction wf_kg = scenario.wave_function().normalized_kg();
    const MultiParticleWaveFunction wf_st = scenario.wave_function().normalized_spacetime();
    const SpacetimeBox& box = wf_kg.box();
    const int n = wf_kg.particle_count();

    // Klein-Gordon residual, finite differences against the closed-form psi.
    {
        const auto configs = random_configurations(box, n, 64, seed ^ 0x9e3779b97f4a7c15ull);
        double worst = 0.0;
        for (const auto& cfg : configs)
            for (int a = 0; a < n; ++a)
                worst = std::max(worst, kg_residual_fd(wf_kg, cfg, a, 1e-3));
        records.push_back(make_check("kg_residual_fd_max", worst, profile.kg_residual));
    }

    // KG norm must not move when the constant-time hypersurfaces do.
    {
        std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ull);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const double base = wf_kg.kg_norm();
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> times(static_cast<std::size_t>(n));
            for (auto& t : times) t = box.time_min() + box.T * u01(rng);
            worst = std::max(worst, std::abs(wf_kg.kg_norm_at_times(times) - base));
        }
        records.push_back(make_check("kg_norm_time_invariance", worst, profile.norm_invariance));
    }

    // Current conservation, three routes per particle: the exact on-shell
    // cancellation, the closed-form divergence, and finite differences.
    {
        double worst_identity = 0.0, worst_on_shell = 0.0;
        double worst_analytic = 0.0, worst_fd = 0.0;
        for (int a = 0; a < n; ++a) {
            const auto field = single_particle_current(wf_kg, a);
            for (const auto& pair : field.pair_terms()) {
                worst_identity = std::max(worst_identity, std::abs(pair_divergence_factor(pair)));
                worst_on_shell =
                    std::max(worst_on_shell, std::abs(pair_divergence_factor_on_shell(pair)));
            }
            DivergenceGrid grid{&box};
            worst_analytic = std::max(
                worst_analytic, chunked_max(grid.size(), exec, [&](std::size_t i) {
                    return std::abs(field.divergence_analytic(grid.point(i)));
                }));
            worst_fd = std::max(worst_fd, chunked_max(grid.size(), exec, [&](std::size_t i) {
                                    return std::abs(field.divergence_fd(grid.point(i), 1e-4));
                                }));
        }
        CheckRecord on_shell{"divergence_on_shell_exact", worst_on_shell, 0.0,
                             worst_on_shell == 0.0};
        records.push_back(on_shell);
        records.push_back(
            make_check("divergence_pair_identity_max", worst_identity, profile.divergence_identity));
        records.push_back(
            make_check("divergence_analytic_max", worst_analytic, profile.divergence_analytic));
        records.push_back(make_check("divergence_fd_max", worst_fd, profile.divergence_fd));
    }

    // Off-node random configurations for the pointwise identities.
    const auto off_node_configs = [&](const MultiParticleWaveFunction& wf, std::size_t want) {
        const double floor = 1e-3 * wf.mean_density();
        std::vector<Configuration> picked;
        std::uint64_t salt = 0;
        while (picked.size() < want && salt < 40) {
            for (const auto& cfg :
                 random_configurations(box, n, want, seed ^ (0xabcdull + salt))) {
                if (picked.size() == want) break;
                if (wf.density(cfg) > floor) picked.push_back(cfg);
            }
            ++salt;
        }
        return picked;
    };

    // Tensor reality plus the reconstruction identity v |psi|^2 = j.
    {
        const auto configs = off_node_configs(wf_kg, 16);
        double worst_imag = 0.0, worst_rec = 0.0;
        const FlowField flow(wf_kg);
        for (const auto& cfg : configs) {
            if (n <= CurrentTensor::dense_particle_limit)
                worst_imag = std::max(worst_imag, current_tensor(wf_kg, cfg).max_imag_ratio());
            const double rho = wf_kg.density(cfg);
            for (int a = 0; a < n; ++a) {
                const FourVector j = flow.current(a).evaluate(cfg[static_cast<std::size_t>(a)]);
                const auto v = flow.try_velocity(cfg, a);
                if (!v) continue;
                const double scale = std::max(euclidean_norm(j), wf_kg.mean_density());
                for (std::size_t mu = 0; mu < 4; ++mu)
                    worst_rec =
                        std::max(worst_rec, std::abs((*v)[mu] * rho - j[mu]) / scale);
            }
        }
        if (n <= CurrentTensor::dense_particle_limit)
            records.push_back(make_check("tensor_imag_ratio_max", worst_imag, profile.tensor_imag));
        records.push_back(
            make_check("reconstruction_identity_max", worst_rec, profile.reconstruction));
    }

    // Contraction of the full tensor over every particle's constant-time slice
    // reproduces the KG norm; the grid sum is exact for trigonometric modes.
    if (n <= 2) {
        int max_comp = 0;
        for (const auto& term : wf_kg.terms())
            for (const auto& mode : term.modes)
                for (int c : mode.n) max_comp = std::max(max_comp, std::abs(c));
        const int g = 2 * max_comp + 3;
        const double cell = box.L / static_cast<double>(g);
        std::vector<double> slice_times(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a)
            slice_times[static_cast<std::size_t>(a)] =
                box.time_min() + box.T * (0.31 + 0.17 * static_cast<double>(a));
        const std::size_t per =
            static_cast<std::size_t>(g) * static_cast<std::size_t>(g) * static_cast<std::size_t>(g);
        std::size_t count = 1;
        for (int a = 0; a < n; ++a) count *= per;
        const std::vector<int> zeros(static_cast<std::size_t>(n), 0);
        const double total = chunked_sum(count, exec, [&](std::size_t flat) {
            Configuration cfg;
            cfg.points.resize(static_cast<std::size_t>(n));
            std::size_t rem = flat;
            for (int a = 0; a < n; ++a) {
                std::size_t cellidx = rem % per;
                rem /= per;
                FourVector p;
                p.t = slice_times[static_cast<std::size_t>(a)];
                p.x = box.origin.x +
                      (static_cast<double>(cellidx % static_cast<std::size_t>(g)) + 0.5) * cell;
                p.y = box.origin.y +
                      (static_cast<double>((cellidx / static_cast<std::size_t>(g)) %
                                           static_cast<std::size_t>(g)) +
                       0.5) *
                          cell;
                p.z = box.origin.z +
                      (static_cast<double>(cellidx /
                                           (static_cast<std::size_t>(g) *
                                            static_cast<std::size_t>(g))) +
                       0.5) *
                          cell;
                cfg[static_cast<std::size_t>(a)] = p;
            }
            double w = 1.0;
            for (int a = 0; a < n; ++a) w *= cell * cell * cell;
            return current_tensor(wf_kg, cfg).component(zeros) * w;
        });
        records.push_back(make_check("tensor_contraction_vs_kg_norm",
                                     std::abs(total - wf_kg.kg_norm()), profile.norm_invariance));
    }

    // Continuity residual on the spacetime-normalized state.
    {
        const FlowField flow(wf_st);
        const auto configs = off_node_configs(wf_st, 32);
        double worst = 0.0;
        for (const auto& cfg : configs) {
            try {
                worst = std::max(worst, continuity_residual(flow, cfg, 1e-3));
            } catch (const node_error&) {
            }
        }
        records.push_back(make_check("continuity_residual_max", worst, profile.continuity));
    }

    // Curve equivalence of the two parameterizations, from the scenario's
    // initial configurations.
    if (!scenario.initial_configurations.empty() && scenario.s_max > 0.0 && scenario.ds > 0.0) {
        const FlowField flow(wf_st);
        double worst_dist = 0.0, worst_conv = 0.0;
        for (const auto& cfg0 : scenario.initial_configurations) {
            const auto nonlocal = integrate_nonlocal(flow, cfg0, scenario.s_max, scenario.ds);
            const auto nonlocal_half =
                integrate_nonlocal(flow, cfg0, scenario.s_max, scenario.ds / 2.0);
            const double steps = scenario.s_max / scenario.ds;
            for (int a = 0; a < n; ++a) {
                const auto& traj = nonlocal[static_cast<std::size_t>(a)];
                worst_conv = std::max(
                    worst_conv,
                    euclidean_norm(traj.back() -
                                   nonlocal_half[static_cast<std::size_t>(a)].back()));
                // Match the local parameter span to the traced time interval.
                const FourVector x0 = cfg0[static_cast<std::size_t>(a)];
                const double dt = std::abs(traj.back().t - x0.t);
                const double j0 = flow.current(a).evaluate(x0).t;
                if (!(j0 > 0.0) || dt == 0.0) continue;
                const double s_local = 2.0 * dt / j0;
                const auto local = integrate_local(flow.current(a), x0, s_local,
                                                   s_local / std::max(steps, 16.0));
                worst_dist = std::max(worst_dist, reparameterization_distance(local, traj, exec));
            }
        }
        records.push_back(
            make_check("reparameterization_distance_max", worst_dist, profile.reparam_distance));
        records.push_back(
            make_check("integrator_self_convergence", worst_conv, profile.self_convergence));
    }

    if (include_equivariance && scenario.s_max > 0.0 && scenario.ds > 0.0) {
        try {
            const auto report = equivariance_test(wf_st, scenario.sampler, scenario.s_max,
                                                  scenario.ds, exec);
            double worst_ks = 0.0;
            for (const auto& r : report.ks)
                worst_ks = std::max(worst_ks, r.statistic / r.threshold);
            double worst_moment = 0.0;
            for (const auto& r : report.moments)
                if (r.tolerance > 0.0)
                    worst_moment =
                        std::max(worst_moment, std::abs(r.sampled - r.reference) / r.tolerance);
            records.push_back(make_check("equivariance_ks_ratio_max", worst_ks, 1.0));
            records.push_back(make_check("equivariance_moment_ratio_max", worst_moment, 1.0));
            records.push_back(make_check("equivariance_drop_fraction", report.drop_fraction, 0.20));
        } catch (const inconclusive_error&) {
            records.push_back(CheckRecord{"equivariance_inconclusive", 1.0, 0.0, false});
        }
    }

    return records;
}

}  // namespace kgflow
