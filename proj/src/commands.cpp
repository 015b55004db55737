#include "kgflow/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <iostream>
#include <sstream>

#include "kgflow/dynamics.hpp"
#include "kgflow/errors.hpp"
#include "kgflow/verify.hpp"

namespace kgflow {

namespace {

namespace fs = std::filesystem;

struct Loaded {
    Scenario scenario;
    std::uint64_t seed;
    ToleranceProfile profile;
};

Loaded load(const CommandOptions& opt) {
    Loaded l{load_scenario(opt.scenario_path), 0, {}};
    if (opt.seed) l.scenario.sampler.seed = *opt.seed;
    if (opt.ds) l.scenario.ds = *opt.ds;
    if (opt.s_max) l.scenario.s_max = *opt.s_max;
    if (opt.samples) l.scenario.sampler.n_samples = *opt.samples;
    l.seed = l.scenario.sampler.seed;
    l.profile = opt.strict ? ToleranceProfile::strict() : ToleranceProfile::defaults();
    return l;
}

HeaderFields base_header(const CommandOptions& opt, std::uint64_t seed) {
    HeaderFields h;
    h.emplace_back("scenario", opt.scenario_path);
    h.emplace_back("seed", std::to_string(seed));
    h.emplace_back("tolerance_profile", opt.strict ? "strict" : "default");
    return h;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

void echo_records(std::ostream& console, const std::vector<CheckRecord>& records) {
    for (const auto& r : records)
        console << (r.pass ? "PASS " : "FAIL ") << r.name << " value=" << format_g17(r.value)
                << " tolerance=" << format_g17(r.tolerance) << "\n";
}

int finish(const CommandOptions& opt, std::ostream& console, const std::string& file,
           const std::string& title, std::uint64_t seed,
           const std::vector<CheckRecord>& records,
           const std::vector<std::pair<std::string, std::string>>& values = {}) {
    std::ostringstream body;
    HeaderFields header = base_header(opt, seed);
    write_header(body, title, header);
    for (const auto& [k, v] : values) body << k << " = " << v << "\n";
    if (!values.empty()) body << "\n";
    write_check_records(body, records);
    if (!opt.out_dir.empty()) open_output(opt.out_dir, file) << body.str();
    echo_records(console, records);
    const bool ok = all_pass(records);
    console << "overall: " << (ok ? "pass" : "fail") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int run_norm(const CommandOptions& opt, std::ostream& console) {
    const Loaded l = load(opt);
    const auto wf = l.scenario.wave_function();
    const auto wf_kg = wf.normalized_kg();
    const auto wf_st = wf.normalized_spacetime();

    std::vector<std::pair<std::string, std::string>> values;
    values.emplace_back("kg_norm_raw", format_g17(wf.kg_norm()));
    values.emplace_back("spacetime_norm_raw", format_g17(wf.spacetime_norm()));
    values.emplace_back("kg_norm_normalized", format_g17(wf_kg.kg_norm()));
    values.emplace_back("spacetime_norm_normalized", format_g17(wf_st.spacetime_norm()));

    std::vector<CheckRecord> records;
    records.push_back(make_check("normalized_kg_norm_unit",
                                 std::abs(wf_kg.kg_norm() - 1.0), 1e-12));
    records.push_back(make_check("normalized_spacetime_norm_unit",
                                 std::abs(wf_st.spacetime_norm() - 1.0), 1e-10));
    {
        std::mt19937_64 rng(l.seed ^ 0xd1b54a32d192ed03ull);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const double base = wf_kg.kg_norm();
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> times(static_cast<std::size_t>(wf.particle_count()));
            for (auto& t : times)
                t = wf.box().time_min() + wf.box().T * u01(rng);
            worst = std::max(worst, std::abs(wf_kg.kg_norm_at_times(times) - base));
        }
        records.push_back(make_check("kg_norm_time_invariance", worst,
                                     l.profile.norm_invariance));
    }
    return finish(opt, console, "norm.txt", "norm report", l.seed, records, values);
}

int run_currents(const CommandOptions& opt, std::ostream& console) {
    const Loaded l = load(opt);
    const auto wf = l.scenario.wave_function().normalized_kg();
    const auto& box = wf.box();
    const int n = wf.particle_count();
    const int g = opt.grid;
    const int slices = 3;

    std::vector<CheckRecord> records;
    for (int a = 0; a < n; ++a) {
        const auto field = single_particle_current(wf, a);

        const std::size_t rows = static_cast<std::size_t>(slices) *
                                 static_cast<std::size_t>(g) * static_cast<std::size_t>(g) *
                                 static_cast<std::size_t>(g);
        std::vector<std::string> lines(rows);
        std::vector<double> div_analytic(rows), div_fd(rows);
        parallel_for(rows, opt.exec, [&](std::size_t i) {
            const std::size_t gs = static_cast<std::size_t>(g);
            const std::size_t iz = i % gs, iy = (i / gs) % gs, ix = (i / (gs * gs)) % gs;
            const std::size_t it = i / (gs * gs * gs);
            const FourVector x{
                box.time_min() + (static_cast<double>(it) + 0.5) * box.T / slices,
                box.origin.x + (static_cast<double>(ix) + 0.5) * box.L / g,
                box.origin.y + (static_cast<double>(iy) + 0.5) * box.L / g,
                box.origin.z + (static_cast<double>(iz) + 0.5) * box.L / g};
            const FourVector j = field.evaluate(x);
            std::ostringstream line;
            line << format_g17(x.t) << '\t' << format_g17(x.x) << '\t' << format_g17(x.y)
                 << '\t' << format_g17(x.z) << '\t' << format_g17(j.t) << '\t'
                 << format_g17(j.x) << '\t' << format_g17(j.y) << '\t' << format_g17(j.z);
            lines[i] = line.str();
            div_analytic[i] = std::abs(field.divergence_analytic(x));
            div_fd[i] = std::abs(field.divergence_fd(x, 1e-4));
        });

        if (!opt.out_dir.empty()) {
            auto out = open_output(opt.out_dir, "current_p" + std::to_string(a + 1) + ".tsv");
            write_header(out, "single-particle current field", base_header(opt, l.seed));
            out << "# columns: t x y z j0 j1 j2 j3\n";
            for (const auto& line : lines) out << line << "\n";
        }

        double worst_identity = 0.0, worst_on_shell = 0.0;
        for (const auto& pair : field.pair_terms()) {
            worst_identity = std::max(worst_identity, std::abs(pair_divergence_factor(pair)));
            worst_on_shell =
                std::max(worst_on_shell, std::abs(pair_divergence_factor_on_shell(pair)));
        }
        const std::string tag = "_p" + std::to_string(a + 1);
        records.push_back(CheckRecord{"divergence_on_shell_exact" + tag, worst_on_shell, 0.0,
                                      worst_on_shell == 0.0});
        records.push_back(make_check("divergence_pair_identity_max" + tag, worst_identity,
                                     l.profile.divergence_identity));
        records.push_back(make_check("divergence_analytic_max" + tag,
                                     *std::max_element(div_analytic.begin(), div_analytic.end()),
                                     l.profile.divergence_analytic));
        records.push_back(make_check("divergence_fd_max" + tag,
                                     *std::max_element(div_fd.begin(), div_fd.end()),
                                     l.profile.divergence_fd));
    }
    return finish(opt, console, "divergence.txt", "current conservation report", l.seed, records);
}

int run_trajectories(const CommandOptions& opt, std::ostream& console) {
    const Loaded l = load(opt);
    if (l.scenario.initial_configurations.empty())
        throw scenario_error(0, "trajectories command needs at least one 'initial' entry");
    if (!(l.scenario.ds > 0.0))
        throw scenario_error(0, "trajectories command needs a positive ds");
    const auto wf = l.scenario.wave_function().normalized_spacetime();
    const FlowField flow(wf);
    const int n = wf.particle_count();

    std::vector<CheckRecord> records;
    std::vector<Trajectory> all_local, all_nonlocal;
    for (std::size_t c = 0; c < l.scenario.initial_configurations.size(); ++c) {
        const auto& cfg0 = l.scenario.initial_configurations[c];
        const auto nonlocal =
            integrate_nonlocal(flow, cfg0, l.scenario.s_max, l.scenario.ds, {});
        const std::string ctag = l.scenario.initial_configurations.size() > 1
                                     ? "_c" + std::to_string(c + 1)
                                     : std::string{};
        double selfconv = 0.0;
        const auto nonlocal_half =
            integrate_nonlocal(flow, cfg0, l.scenario.s_max, l.scenario.ds / 2.0, {});
        for (int a = 0; a < n; ++a) {
            const auto& traj = nonlocal[static_cast<std::size_t>(a)];
            all_nonlocal.push_back(traj);
            selfconv = std::max(selfconv,
                                euclidean_norm(traj.samples.back().point -
                                               nonlocal_half[static_cast<std::size_t>(a)]
                                                   .samples.back()
                                                   .point));

            const FourVector x0 = cfg0[static_cast<std::size_t>(a)];
            const double dt = std::abs(traj.samples.back().point.t - x0.t);
            const double j0 = flow.current(a).evaluate(x0).t;
            if (traj.samples.size() < 2 || !(j0 > 0.0) || dt == 0.0) continue;
            const double steps = l.scenario.s_max / l.scenario.ds;
            const double s_local = 2.0 * dt / j0;
            const auto local = integrate_local(flow.current(a), x0, s_local,
                                               s_local / std::max(steps, 16.0));
            all_local.push_back(local);
            records.push_back(make_check(
                "reparameterization_distance_p" + std::to_string(a + 1) + ctag,
                reparameterization_distance(local, traj, opt.exec),
                l.profile.reparam_distance));
        }
        if (l.scenario.s_max > 0.0)
            records.push_back(make_check("integrator_self_convergence" + ctag, selfconv,
                                         l.profile.self_convergence));
    }

    if (!opt.out_dir.empty()) {
        {
            auto out = open_output(opt.out_dir, "trajectories_nonlocal.tsv");
            write_header(out, "nonlocal-parameter trajectories", base_header(opt, l.seed));
            write_trajectory_table(out, all_nonlocal);
        }
        {
            auto out = open_output(opt.out_dir, "trajectories_local.tsv");
            write_header(out, "local-parameter trajectories", base_header(opt, l.seed));
            write_trajectory_table(out, all_local);
        }
    }
    return finish(opt, console, "reparam.txt", "parameterization equivalence report", l.seed,
                  records);
}

int run_equivariance(const CommandOptions& opt, std::ostream& console) {
    const Loaded l = load(opt);
    if (!(l.scenario.s_max > 0.0) || !(l.scenario.ds > 0.0))
        throw scenario_error(0, "equivariance command needs positive s_max and ds");
    const auto wf = l.scenario.wave_function().normalized_spacetime();
    try {
        const auto report = equivariance_test(wf, l.scenario.sampler, l.scenario.s_max,
                                              l.scenario.ds, opt.exec);
        if (!opt.out_dir.empty()) {
            auto out = open_output(opt.out_dir, "equivariance.txt");
            write_distribution_report(out, report, base_header(opt, l.seed));
        }
        console << "surviving " << report.surviving << " of " << report.total_samples
                << " (drop fraction " << format_g17(report.drop_fraction) << ")\n";
        for (const auto& r : report.ks)
            console << (r.pass ? "PASS ks " : "FAIL ks ") << r.coordinate << " statistic="
                    << format_g17(r.statistic) << " threshold=" << format_g17(r.threshold)
                    << "\n";
        std::size_t moment_fails = 0;
        for (const auto& r : report.moments)
            if (!r.pass) ++moment_fails;
        console << "moment checks: " << report.moments.size() - moment_fails << "/"
                << report.moments.size() << " pass\n";
        console << "overall: " << (report.pass ? "pass" : "fail") << "\n";
        return report.pass ? 0 : 1;
    } catch (const inconclusive_error& e) {
        if (!opt.out_dir.empty()) {
            auto out = open_output(opt.out_dir, "equivariance.txt");
            write_header(out, "equivariance report", base_header(opt, l.seed));
            out << "inconclusive = " << e.what() << "\noverall = fail\n";
        }
        console << "inconclusive: " << e.what() << "\n";
        return 1;
    }
}

int run_verify_all(const CommandOptions& opt, std::ostream& console) {
    const Loaded l = load(opt);
    const bool with_equivariance = l.scenario.s_max > 0.0 && l.scenario.ds > 0.0;
    const auto records =
        run_verification(l.scenario, l.profile, l.seed, with_equivariance, opt.exec);
    return finish(opt, console, "verify.txt", "invariant suite report", l.seed, records);
}

}  // namespace kgflow
