#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kgflow/ensemble.hpp"
#include "kgflow/wavefunction.hpp"

namespace kgflow {

/// One scenario file: the box, the particle masses, the superposition terms,
/// and the run parameters shared by the commands. The text format is
/// line-oriented key = value entries under [box], [particles], [terms] and
/// [run] section headers; complex numbers are written as "(re, im)" pairs.
struct Scenario {
    SpacetimeBox box;
    std::vector<double> masses;
    std::vector<MultiParticleWaveFunction::TermInput> terms;

    std::vector<Configuration> initial_configurations;
    double s_max = 0.0;
    double ds = 0.0;
    SamplerConfig sampler;

    MultiParticleWaveFunction wave_function() const {
        return MultiParticleWaveFunction(box, masses, terms);
    }
};

/// Parses and validates; every violated invariant reports the offending line.
Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical text form; parse(serialize(s)) reproduces s value for value.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace kgflow
