#pragma once

#include <stdexcept>
#include <string>

namespace kgflow {

/// Velocity requested at (or too close to) a node of |psi|^2, where
/// v = j / |psi|^2 is a 0/0 form and undefined.
class node_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Metropolis chain failed to move (acceptance rate below 1 percent).
class sampler_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A statistical verdict cannot be drawn with the requested parameters.
class inconclusive_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario file problem, carrying the 1-based line number when known.
class scenario_error : public std::runtime_error {
public:
    scenario_error(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

}  // namespace kgflow
