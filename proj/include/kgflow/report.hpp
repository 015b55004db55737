#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kgflow/dynamics.hpp"
#include "kgflow/ensemble.hpp"

namespace kgflow {

/// One residual check: value, the tolerance it was held to, and the verdict.
struct CheckRecord {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline CheckRecord make_check(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, value < tolerance};
}

/// %.17g rendering used for every floating value written to output files.
std::string format_g17(double v);

using HeaderFields = std::vector<std::pair<std::string, std::string>>;

void write_header(std::ostream& out, const std::string& title, const HeaderFields& fields);
void write_check_records(std::ostream& out, const std::vector<CheckRecord>& records);

/// Trajectory table, one row per sample:
///   particle  param  t  x  y  z  causal
/// `causal` classifies the segment ending at the row; the first row of each
/// particle carries "-".
void write_trajectory_table(std::ostream& out, const std::vector<Trajectory>& trajectories);

void write_distribution_report(std::ostream& out, const DistributionReport& report,
                               const HeaderFields& fields);

bool all_pass(const std::vector<CheckRecord>& records);

}  // namespace kgflow
