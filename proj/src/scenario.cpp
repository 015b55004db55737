#include "kgflow/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kgflow/errors.hpp"

namespace kgflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& text, int line, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw scenario_error(line, "cannot parse " + what + " from '" + text + "'");
}

std::uint64_t parse_u64(const std::string& text, int line, const std::string& what) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw scenario_error(line, "cannot parse " + what + " from '" + text + "'");
}

// Splits "(a, b, ...)" groups out of a line: returns the contents between
// balanced parentheses in order.
std::vector<std::string> paren_groups(const std::string& text, int line) {
    std::vector<std::string> groups;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c != '(') throw scenario_error(line, "expected '(' in '" + text + "'");
        const std::size_t close = text.find(')', i);
        if (close == std::string::npos)
            throw scenario_error(line, "unbalanced parenthesis in '" + text + "'");
        groups.push_back(text.substr(i + 1, close - i - 1));
        i = close + 1;
    }
    return groups;
}

std::vector<double> split_numbers(const std::string& group, std::size_t expected, int line,
                                  const std::string& what) {
    std::vector<double> values;
    std::string item;
    std::stringstream ss(group);
    while (std::getline(ss, item, ',')) values.push_back(parse_double(trim(item), line, what));
    if (values.size() != expected)
        throw scenario_error(line, what + " needs " + std::to_string(expected) +
                                       " comma-separated values, got " +
                                       std::to_string(values.size()));
    return values;
}

std::array<int, 3> int_triple(const std::string& group, int line) {
    const auto values = split_numbers(group, 3, line, "momentum triple");
    std::array<int, 3> t{};
    for (int d = 0; d < 3; ++d) {
        const double v = values[static_cast<std::size_t>(d)];
        t[static_cast<std::size_t>(d)] = static_cast<int>(v);
        if (static_cast<double>(t[static_cast<std::size_t>(d)]) != v)
            throw scenario_error(line, "momentum components must be integers");
    }
    return t;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    bool have_L = false, have_T = false;
    FourVector origin{};
    double L = 0.0, T = 0.0;
    std::vector<int> term_lines;

    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string text = raw;
        const std::size_t hash = text.find('#');
        if (hash != std::string::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;

        if (text.front() == '[') {
            if (text.back() != ']') throw scenario_error(line, "malformed section header");
            section = text.substr(1, text.size() - 2);
            if (section != "box" && section != "particles" && section != "terms" &&
                section != "run")
                throw scenario_error(line, "unknown section [" + section + "]");
            continue;
        }

        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) throw scenario_error(line, "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (section.empty()) throw scenario_error(line, "entry before any section header");

        if (section == "box") {
            if (key == "L") {
                L = parse_double(value, line, "L");
                have_L = true;
            } else if (key == "T") {
                T = parse_double(value, line, "T");
                have_T = true;
            } else if (key == "origin") {
                const auto groups = paren_groups(value, line);
                if (groups.size() != 1) throw scenario_error(line, "origin needs one 4-tuple");
                const auto v = split_numbers(groups[0], 4, line, "origin");
                origin = {v[0], v[1], v[2], v[3]};
            } else {
                throw scenario_error(line, "unknown box key '" + key + "'");
            }
        } else if (section == "particles") {
            if (key != "mass") throw scenario_error(line, "unknown particles key '" + key + "'");
            const double m = parse_double(value, line, "mass");
            if (m < 0.0) throw scenario_error(line, "mass must be nonnegative");
            sc.masses.push_back(m);
        } else if (section == "terms") {
            if (key != "term") throw scenario_error(line, "unknown terms key '" + key + "'");
            const std::size_t colon = value.find(':');
            if (colon == std::string::npos)
                throw scenario_error(line, "term needs 'coefficient : momenta'");
            const auto coeff_groups = paren_groups(trim(value.substr(0, colon)), line);
            if (coeff_groups.size() != 1)
                throw scenario_error(line, "term coefficient must be one (re, im) pair");
            const auto c = split_numbers(coeff_groups[0], 2, line, "coefficient");
            const auto mom_groups = paren_groups(trim(value.substr(colon + 1)), line);
            if (mom_groups.empty()) throw scenario_error(line, "term has no momentum triples");
            std::vector<std::array<int, 3>> momenta;
            for (const auto& g : mom_groups) momenta.push_back(int_triple(g, line));
            sc.terms.emplace_back(Complex{c[0], c[1]}, std::move(momenta));
            term_lines.push_back(line);
        } else {  // run
            if (key == "s_max") {
                sc.s_max = parse_double(value, line, "s_max");
                if (sc.s_max < 0.0) throw scenario_error(line, "s_max must be nonnegative");
            } else if (key == "ds") {
                sc.ds = parse_double(value, line, "ds");
                if (!(sc.ds > 0.0)) throw scenario_error(line, "ds must be positive");
            } else if (key == "seed") {
                sc.sampler.seed = parse_u64(value, line, "seed");
            } else if (key == "samples") {
                sc.sampler.n_samples = static_cast<std::size_t>(parse_u64(value, line, "samples"));
                if (sc.sampler.n_samples < 1)
                    throw scenario_error(line, "samples must be >= 1");
            } else if (key == "burn_in") {
                sc.sampler.burn_in = static_cast<std::size_t>(parse_u64(value, line, "burn_in"));
            } else if (key == "thinning") {
                sc.sampler.thinning = static_cast<std::size_t>(parse_u64(value, line, "thinning"));
                if (sc.sampler.thinning < 1)
                    throw scenario_error(line, "thinning must be >= 1");
            } else if (key == "proposal_scale") {
                sc.sampler.proposal_scale = parse_double(value, line, "proposal_scale");
                if (!(sc.sampler.proposal_scale > 0.0))
                    throw scenario_error(line, "proposal_scale must be positive");
            } else if (key == "initial") {
                const auto groups = paren_groups(value, line);
                Configuration cfg;
                for (const auto& g : groups) {
                    const auto v = split_numbers(g, 4, line, "initial point");
                    cfg.points.push_back({v[0], v[1], v[2], v[3]});
                }
                if (cfg.points.empty())
                    throw scenario_error(line, "initial needs at least one 4-tuple");
                sc.initial_configurations.push_back(std::move(cfg));
            } else {
                throw scenario_error(line, "unknown run key '" + key + "'");
            }
        }
    }

    if (!have_L || !have_T) throw scenario_error(0, "box section must set L and T");
    try {
        sc.box = SpacetimeBox(L, T, origin);
    } catch (const std::invalid_argument& e) {
        throw scenario_error(0, e.what());
    }
    if (sc.masses.empty()) throw scenario_error(0, "particles section must list at least one mass");
    if (sc.terms.empty()) throw scenario_error(0, "terms section must list at least one term");

    for (std::size_t i = 0; i < sc.terms.size(); ++i) {
        if (sc.terms[i].second.size() != sc.masses.size())
            throw scenario_error(term_lines[i],
                                 "term " + std::to_string(i + 1) + " has " +
                                     std::to_string(sc.terms[i].second.size()) +
                                     " momentum triples, expected " +
                                     std::to_string(sc.masses.size()));
    }
    bool any_nonzero = false;
    for (const auto& t : sc.terms) any_nonzero = any_nonzero || t.first != Complex{};
    if (!any_nonzero) throw scenario_error(0, "all term coefficients are zero");

    for (const auto& cfg : sc.initial_configurations) {
        if (cfg.size() != sc.masses.size())
            throw scenario_error(0, "initial configuration has " + std::to_string(cfg.size()) +
                                        " points, expected " + std::to_string(sc.masses.size()));
    }
    return sc;
}

Scenario parse_scenario_text(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw scenario_error(0, "cannot open scenario file '" + path + "'");
    return parse_scenario(in);
}

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "[box]\n";
    out << "L = " << g17(sc.box.L) << "\n";
    out << "T = " << g17(sc.box.T) << "\n";
    out << "origin = (" << g17(sc.box.origin.t) << ", " << g17(sc.box.origin.x) << ", "
        << g17(sc.box.origin.y) << ", " << g17(sc.box.origin.z) << ")\n";
    out << "\n[particles]\n";
    for (double m : sc.masses) out << "mass = " << g17(m) << "\n";
    out << "\n[terms]\n";
    for (const auto& [coeff, momenta] : sc.terms) {
        out << "term = (" << g17(coeff.real()) << ", " << g17(coeff.imag()) << ") :";
        for (const auto& triple : momenta)
            out << " (" << triple[0] << ", " << triple[1] << ", " << triple[2] << ")";
        out << "\n";
    }
    out << "\n[run]\n";
    if (sc.s_max > 0.0) out << "s_max = " << g17(sc.s_max) << "\n";
    if (sc.ds > 0.0) out << "ds = " << g17(sc.ds) << "\n";
    out << "seed = " << sc.sampler.seed << "\n";
    out << "samples = " << sc.sampler.n_samples << "\n";
    out << "burn_in = " << sc.sampler.burn_in << "\n";
    out << "thinning = " << sc.sampler.thinning << "\n";
    out << "proposal_scale = " << g17(sc.sampler.proposal_scale) << "\n";
    for (const auto& cfg : sc.initial_configurations) {
        out << "initial =";
        for (const auto& p : cfg.points)
            out << " (" << g17(p.t) << ", " << g17(p.x) << ", " << g17(p.y) << ", " << g17(p.z)
                << ")";
        out << "\n";
    }
    return out.str();
}

}  // namespace kgflow
