// Command-line front end: scenario-driven analyses with deterministic
// structured outputs. Exit codes: 0 pass, 1 check failure, 2 usage/parse error.

#include <iostream>

#include "CLI11.hpp"
#include "kgflow/commands.hpp"
#include "kgflow/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Exact Klein-Gordon superpositions, conserved currents, and the "
                 "trajectory flows they generate on a finite spacetime box"};
    app.require_subcommand(1);

    kgflow::CommandOptions opt;
    std::uint64_t seed = 0;
    double ds = 0.0, s_max = 0.0;
    std::size_t samples = 0;
    std::string profile = "default";
    bool serial = false;

    const auto add_common = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--scenario", opt.scenario_path, "scenario file")
            ->required()
            ->check(CLI::ExistingFile);
        auto* out = cmd->add_option("--out", opt.out_dir, "output directory");
        if (needs_out) out->required();
        cmd->add_option("--seed", seed, "override the scenario seed")
            ->each([&](const std::string&) { opt.seed = seed; });
        cmd->add_option("--ds", ds, "override the integration step")
            ->each([&](const std::string&) { opt.ds = ds; });
        cmd->add_option("--s-max", s_max, "override the flow parameter span")
            ->each([&](const std::string&) { opt.s_max = s_max; });
        cmd->add_option("--samples", samples, "override the ensemble size")
            ->each([&](const std::string&) { opt.samples = samples; });
        cmd->add_option("--tolerance-profile", profile, "default or strict")
            ->check(CLI::IsMember({"default", "strict"}));
        cmd->add_flag("--serial", serial, "run the parallel kernels on one thread");
    };

    auto* norm = app.add_subcommand("norm", "norms and hypersurface-time independence");
    add_common(norm, false);
    auto* currents = app.add_subcommand(
        "currents", "current fields on a grid plus conservation residuals");
    add_common(currents, true);
    currents->add_option("--grid", opt.grid, "spatial grid points per axis")
        ->check(CLI::PositiveNumber);
    auto* trajectories = app.add_subcommand(
        "trajectories", "local and nonlocal trajectory tables plus curve equivalence");
    add_common(trajectories, true);
    auto* equivariance = app.add_subcommand(
        "equivariance", "Monte Carlo distribution preservation under the flow");
    add_common(equivariance, true);
    auto* verify = app.add_subcommand("verify-all", "the full invariant suite");
    add_common(verify, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    opt.strict = profile == "strict";
    opt.exec = serial ? kgflow::Exec::Serial : kgflow::Exec::Parallel;

    try {
        if (norm->parsed()) return kgflow::run_norm(opt, std::cout);
        if (currents->parsed()) return kgflow::run_currents(opt, std::cout);
        if (trajectories->parsed()) return kgflow::run_trajectories(opt, std::cout);
        if (equivariance->parsed()) return kgflow::run_equivariance(opt, std::cout);
        if (verify->parsed()) return kgflow::run_verify_all(opt, std::cout);
    } catch (const kgflow::scenario_error& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
