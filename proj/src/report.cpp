#include "kgflow/report.hpp"

#include <cstdio>
#include <ostream>

namespace kgflow {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_header(std::ostream& out, const std::string& title, const HeaderFields& fields) {
    out << "# " << title << "\n";
    for (const auto& [key, value] : fields) out << key << " = " << value << "\n";
    out << "\n";
}

void write_check_records(std::ostream& out, const std::vector<CheckRecord>& records) {
    for (const auto& r : records) {
        out << "check = " << r.name << "\n";
        out << "value = " << format_g17(r.value) << "\n";
        out << "tolerance = " << format_g17(r.tolerance) << "\n";
        out << "pass = " << (r.pass ? "true" : "false") << "\n\n";
    }
    out << "overall = " << (all_pass(records) ? "pass" : "fail") << "\n";
}

bool all_pass(const std::vector<CheckRecord>& records) {
    for (const auto& r : records)
        if (!r.pass) return false;
    return true;
}

void write_trajectory_table(std::ostream& out, const std::vector<Trajectory>& trajectories) {
    out << "# columns: particle param t x y z causal\n";
    for (const auto& traj : trajectories) {
        std::vector<CausalClass> classes;
        if (traj.samples.size() >= 2) classes = causal_character(traj);
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            const auto& s = traj.samples[i];
            out << traj.particle + 1 << '\t' << format_g17(s.param) << '\t'
                << format_g17(s.point.t) << '\t' << format_g17(s.point.x) << '\t'
                << format_g17(s.point.y) << '\t' << format_g17(s.point.z) << '\t'
                << (i == 0 ? "-" : to_string(classes[i - 1])) << "\n";
        }
    }
}

void write_distribution_report(std::ostream& out, const DistributionReport& report,
                               const HeaderFields& fields) {
    write_header(out, "equivariance report", fields);
    out << "samples = " << report.total_samples << "\n";
    out << "surviving = " << report.surviving << "\n";
    out << "dropped_box_exit = " << report.dropped_box_exit << "\n";
    out << "dropped_node = " << report.dropped_node << "\n";
    out << "drop_fraction = " << format_g17(report.drop_fraction) << "\n";
    out << "s = " << format_g17(report.s) << "\n";
    out << "ds = " << format_g17(report.ds) << "\n";
    for (std::size_t a = 0; a < report.time_windows.size(); ++a)
        out << "window_p" << a + 1 << " = (" << format_g17(report.time_windows[a][0]) << ", "
            << format_g17(report.time_windows[a][1]) << ")\n";
    out << "\n";
    for (const auto& r : report.ks) {
        out << "ks = " << r.coordinate << "\n";
        out << "statistic = " << format_g17(r.statistic) << "\n";
        out << "threshold = " << format_g17(r.threshold) << "\n";
        out << "pass = " << (r.pass ? "true" : "false") << "\n\n";
    }
    for (const auto& r : report.moments) {
        out << "moment = " << r.label << "\n";
        out << "sampled = " << format_g17(r.sampled) << "\n";
        out << "reference = " << format_g17(r.reference) << "\n";
        out << "tolerance = " << format_g17(r.tolerance) << "\n";
        out << "pass = " << (r.pass ? "true" : "false") << "\n\n";
    }
    out << "overall = " << (report.pass ? "pass" : "fail") << "\n";
}

}  // namespace kgflow
