#include "kgflow/wavefunction.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace kgflow {

namespace {

Complex unit_phase(double phase) {  // exp(-i phase)
    return {std::cos(phase), -std::sin(phase)};
}

}  // namespace

MultiParticleWaveFunction::MultiParticleWaveFunction(const SpacetimeBox& box,
                                                     std::vector<double> masses,
                                                     const std::vector<TermInput>& terms)
    : box_(box), masses_(std::move(masses)) {
    if (masses_.empty())
        throw std::invalid_argument("wave function needs at least one particle");
    for (double m : masses_)
        if (!(m >= 0.0)) throw std::invalid_argument("particle mass must be nonnegative");
    n_ = static_cast<int>(masses_.size());

    // Merge duplicate mode tuples; the sparse coefficient map is keyed by the
    // flattened integer triples.
    std::map<std::vector<int>, Complex> merged;
    for (const TermInput& input : terms) {
        if (input.second.size() != masses_.size())
            throw std::invalid_argument("term has " + std::to_string(input.second.size()) +
                                        " momentum triples, expected " +
                                        std::to_string(masses_.size()));
        std::vector<int> key;
        key.reserve(3 * masses_.size());
        for (const auto& triple : input.second)
            for (int c : triple) key.push_back(c);
        merged[key] += input.first;
    }

    const double V = box_.volume();
    for (const auto& [key, coeff] : merged) {
        if (coeff == Complex{}) continue;
        Term term;
        term.coeff = coeff;
        term.norm = 1.0;
        for (int a = 0; a < n_; ++a) {
            Mode mode;
            mode.n = {key[3 * a], key[3 * a + 1], key[3 * a + 2]};
            mode.mass = masses_[static_cast<std::size_t>(a)];
            const FourVector k = mode_momentum(mode, box_);
            term.norm /= std::sqrt(k.t * V);
            term.modes.push_back(mode);
            term.momenta.push_back(k);
        }
        terms_.push_back(std::move(term));
    }
    if (terms_.empty())
        throw std::invalid_argument("wave function has no nonzero term");

    for (const Term& term : terms_) kg_norm_ += std::norm(term.coeff);

    // N: spatial integrals force equal momenta slot by slot, which on a
    // per-slot mass shell also forces dk0 = 0, so only diagonal terms survive.
    // The general time antiderivative is kept for clarity of the reduction.
    Complex n_acc = 0.0;
    for (const Term& ti : terms_) {
        for (const Term& tj : terms_) {
            bool spatial_equal = true;
            for (int a = 0; a < n_ && spatial_equal; ++a)
                spatial_equal = ti.modes[static_cast<std::size_t>(a)].n ==
                                tj.modes[static_cast<std::size_t>(a)].n;
            if (!spatial_equal) continue;
            Complex f = std::conj(ti.coeff) * tj.coeff;
            for (int a = 0; a < n_; ++a) {
                const double k0i = ti.momenta[static_cast<std::size_t>(a)].t;
                const double k0j = tj.momenta[static_cast<std::size_t>(a)].t;
                f *= box_time_integral(k0i - k0j, box_.time_min(), box_.T) /
                     std::sqrt(k0i * k0j);
            }
            n_acc += f;
        }
    }
    spacetime_norm_ = n_acc.real();
}

void MultiParticleWaveFunction::check_arity(const Configuration& cfg) const {
    if (static_cast<int>(cfg.size()) != n_)
        throw std::invalid_argument("configuration has " + std::to_string(cfg.size()) +
                                    " points; wave function has " + std::to_string(n_) +
                                    " particles");
}

Complex MultiParticleWaveFunction::evaluate(const Configuration& cfg) const {
    check_arity(cfg);
    Complex acc = 0.0;
    for (const Term& term : terms_) {
        double phase = 0.0;
        for (int a = 0; a < n_; ++a)
            phase += minkowski_dot(term.momenta[static_cast<std::size_t>(a)],
                                   cfg[static_cast<std::size_t>(a)]);
        acc += term.coeff * term.norm * unit_phase(phase);
    }
    return acc;
}

std::array<Complex, 4> MultiParticleWaveFunction::gradient(const Configuration& cfg,
                                                           int particle) const {
    check_arity(cfg);
    if (particle < 0 || particle >= n_)
        throw std::invalid_argument("particle index " + std::to_string(particle) +
                                    " out of range");
    std::array<Complex, 4> g{};
    const Complex minus_i{0.0, -1.0};
    for (const Term& term : terms_) {
        double phase = 0.0;
        for (int a = 0; a < n_; ++a)
            phase += minkowski_dot(term.momenta[static_cast<std::size_t>(a)],
                                   cfg[static_cast<std::size_t>(a)]);
        const Complex value = term.coeff * term.norm * unit_phase(phase);
        // d/dx^mu exp(-i k.x) = -i k_mu exp(-i k.x), with the lowered k_mu.
        const FourVector k_low = flip_spatial(term.momenta[static_cast<std::size_t>(particle)]);
        const Complex f = minus_i * value;
        for (std::size_t mu = 0; mu < 4; ++mu) g[mu] += f * k_low[mu];
    }
    return g;
}

double MultiParticleWaveFunction::density(const Configuration& cfg) const {
    return std::norm(evaluate(cfg));
}

double MultiParticleWaveFunction::kg_norm_at_times(std::span<const double> times) const {
    if (static_cast<int>(times.size()) != n_)
        throw std::invalid_argument("expected one hypersurface time per particle");
    Complex acc = 0.0;
    for (const Term& ti : terms_) {
        for (const Term& tj : terms_) {
            bool spatial_equal = true;
            for (int a = 0; a < n_ && spatial_equal; ++a)
                spatial_equal = ti.modes[static_cast<std::size_t>(a)].n ==
                                tj.modes[static_cast<std::size_t>(a)].n;
            if (!spatial_equal) continue;
            Complex f = std::conj(ti.coeff) * tj.coeff;
            for (int a = 0; a < n_; ++a) {
                const double k0i = ti.momenta[static_cast<std::size_t>(a)].t;
                const double k0j = tj.momenta[static_cast<std::size_t>(a)].t;
                const double dk0 = k0i - k0j;
                const double t_a = times[static_cast<std::size_t>(a)];
                f *= (k0i + k0j) / (2.0 * std::sqrt(k0i * k0j)) *
                     Complex{std::cos(dk0 * t_a), std::sin(dk0 * t_a)};
            }
            acc += f;
        }
    }
    return acc.real();
}

double MultiParticleWaveFunction::mean_density() const {
    double cells = 1.0;
    for (int a = 0; a < n_; ++a) cells *= box_.four_volume();
    return spacetime_norm_ / cells;
}

MultiParticleWaveFunction MultiParticleWaveFunction::scaled(double factor) const {
    std::vector<TermInput> inputs;
    inputs.reserve(terms_.size());
    for (const Term& term : terms_) {
        std::vector<std::array<int, 3>> triples;
        triples.reserve(term.modes.size());
        for (const Mode& m : term.modes) triples.push_back(m.n);
        inputs.emplace_back(term.coeff * factor, std::move(triples));
    }
    return MultiParticleWaveFunction(box_, masses_, inputs);
}

MultiParticleWaveFunction MultiParticleWaveFunction::normalized_kg() const {
    if (!(kg_norm_ > 0.0)) throw std::invalid_argument("cannot normalize a zero wave function");
    return scaled(1.0 / std::sqrt(kg_norm_));
}

MultiParticleWaveFunction MultiParticleWaveFunction::normalized_spacetime() const {
    if (!(spacetime_norm_ > 0.0))
        throw std::invalid_argument("cannot normalize a zero wave function");
    return scaled(1.0 / std::sqrt(spacetime_norm_));
}

Complex box_time_integral(double dk0, double t0, double T) {
    if (dk0 == 0.0) return {T, 0.0};
    const Complex i_dk0{0.0, dk0};
    const Complex upper{std::cos(dk0 * (t0 + T)), std::sin(dk0 * (t0 + T))};
    const Complex lower{std::cos(dk0 * t0), std::sin(dk0 * t0)};
    return (upper - lower) / i_dk0;
}

}  // namespace kgflow
