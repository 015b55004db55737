#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "kgflow/parallel.hpp"

namespace kgflow {

/// Options shared by the command entry points; the CLI fills this from flags,
/// tests fill it directly. Optional fields override the scenario's run
/// parameters when set.
struct CommandOptions {
    std::string scenario_path;
    std::string out_dir;  // empty: no files, console output only
    std::optional<std::uint64_t> seed;
    std::optional<double> ds;
    std::optional<double> s_max;
    std::optional<std::size_t> samples;
    bool strict = false;
    int grid = 8;
    Exec exec = Exec::Parallel;
};

/// Exit codes: 0 all checks pass, 1 a check failed or was inconclusive,
/// 2 usage or scenario errors. Each command writes deterministic text files
/// under out_dir (when set) and a short summary to `console`.
int run_norm(const CommandOptions& options, std::ostream& console);
int run_currents(const CommandOptions& options, std::ostream& console);
int run_trajectories(const CommandOptions& options, std::ostream& console);
int run_equivariance(const CommandOptions& options, std::ostream& console);
int run_verify_all(const CommandOptions& options, std::ostream& console);

}  // namespace kgflow
