#include "kgflow/currents.hpp"

#include <cmath>

#include "kgflow/errors.hpp"
#include <map>
#include <stdexcept>
#include <string>

namespace kgflow {

double pair_divergence_factor(const PairTerm& term) {
    return minkowski_dot(term.k + term.k_prime, term.k - term.k_prime) / 2.0;
}

double pair_divergence_factor_on_shell(const PairTerm& term) {
    return (term.mass * term.mass - term.mass * term.mass) / 2.0;
}

SingleParticleCurrentField single_particle_current(const MultiParticleWaveFunction& wf,
                                                   int particle) {
    const int n = wf.particle_count();
    if (particle < 0 || particle >= n)
        throw std::invalid_argument("particle index " + std::to_string(particle) +
                                    " out of range");

    SingleParticleCurrentField field;
    field.particle_ = particle;
    field.box_ = wf.box();
    const double V = wf.box().volume();

    // Group terms by the spectator mode tuple. Constant-time integration over
    // each spectator contributes exactly 1 when its modes agree and 0
    // otherwise, so only within-group pairs survive.
    std::map<std::vector<int>, std::vector<SingleParticleCurrentField::GroupMode>> grouped;
    for (const auto& term : wf.terms()) {
        std::vector<int> key;
        key.reserve(3 * static_cast<std::size_t>(n - 1));
        for (int b = 0; b < n; ++b) {
            if (b == particle) continue;
            for (int c : term.modes[static_cast<std::size_t>(b)].n) key.push_back(c);
        }
        const FourVector k = term.momenta[static_cast<std::size_t>(particle)];
        grouped[key].push_back({term.coeff / std::sqrt(k.t * V), k});
    }

    const double mass = wf.mass(particle);
    for (auto& [key, modes] : grouped) {
        for (const auto& left : modes) {
            for (const auto& right : modes) {
                PairTerm pair;
                pair.amplitude = std::conj(left.coeff) * right.coeff;
                pair.k = left.k;
                pair.k_prime = right.k;
                pair.mass = mass;
                field.amplitude_bound_ +=
                    std::abs(pair.amplitude) * euclidean_norm(0.5 * (pair.k + pair.k_prime));
                field.pairs_.push_back(pair);
            }
        }
        field.groups_.push_back(std::move(modes));
    }
    return field;
}

FourVector SingleParticleCurrentField::evaluate(const FourVector& x) const {
    // Per group, j_mu = -Im[conj(phi) d_mu phi] with phi the group mode sum;
    // equivalent to the pair sum but O(#modes).
    FourVector j_low{};
    for (const auto& group : groups_) {
        Complex phi = 0.0;
        std::array<Complex, 4> dphi{};
        for (const auto& gm : group) {
            const double phase = minkowski_dot(gm.k, x);
            const Complex value = gm.coeff * Complex{std::cos(phase), -std::sin(phase)};
            phi += value;
            const FourVector k_low = flip_spatial(gm.k);
            const Complex f = Complex{0.0, -1.0} * value;
            for (std::size_t mu = 0; mu < 4; ++mu) dphi[mu] += f * k_low[mu];
        }
        for (std::size_t mu = 0; mu < 4; ++mu)
            j_low[mu] -= std::imag(std::conj(phi) * dphi[mu]);
    }
    return flip_spatial(j_low);
}

FourVector SingleParticleCurrentField::evaluate_pairwise(const FourVector& x) const {
    FourVector j{};
    for (const PairTerm& pair : pairs_) {
        const double phase = minkowski_dot(pair.k - pair.k_prime, x);
        const double weight =
            (pair.amplitude * Complex{std::cos(phase), std::sin(phase)}).real();
        j += weight * (0.5 * (pair.k + pair.k_prime));
    }
    return j;
}

double SingleParticleCurrentField::divergence_analytic(const FourVector& x) const {
    double acc = 0.0;
    for (const PairTerm& pair : pairs_) {
        const double phase = minkowski_dot(pair.k - pair.k_prime, x);
        const Complex i_phase{0.0, 1.0};
        acc += (pair.amplitude * i_phase * Complex{std::cos(phase), std::sin(phase)}).real() *
               pair_divergence_factor(pair);
    }
    return acc;
}

double SingleParticleCurrentField::divergence_fd(const FourVector& x, double h) const {
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    double acc = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        FourVector plus = x, minus = x;
        plus[mu] += h;
        minus[mu] -= h;
        acc += (evaluate(plus)[mu] - evaluate(minus)[mu]) / (2.0 * h);
    }
    return acc;
}

CurrentTensor current_tensor(const MultiParticleWaveFunction& wf, const Configuration& cfg) {
    const int n = wf.particle_count();
    if (static_cast<int>(cfg.size()) != n)
        throw std::invalid_argument("configuration has " + std::to_string(cfg.size()) +
                                    " points; wave function has " + std::to_string(n) +
                                    " particles");

    CurrentTensor tensor;
    tensor.n_ = n;
    const double V = wf.box().volume();

    // Per-term, per-slot mode values u_k(x_a); pairs keep the conjugated
    // product plus the lowered half-sum momenta.
    const auto& terms = wf.terms();
    std::vector<std::vector<Complex>> u(terms.size(), std::vector<Complex>(static_cast<std::size_t>(n)));
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (int a = 0; a < n; ++a) {
            const FourVector& k = terms[i].momenta[static_cast<std::size_t>(a)];
            const double phase = minkowski_dot(k, cfg[static_cast<std::size_t>(a)]);
            u[i][static_cast<std::size_t>(a)] =
                Complex{std::cos(phase), -std::sin(phase)} / std::sqrt(k.t * V);
        }
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t jt = 0; jt < terms.size(); ++jt) {
            CurrentTensor::PairEntry entry;
            entry.base = std::conj(terms[i].coeff) * terms[jt].coeff;
            for (int a = 0; a < n; ++a) {
                entry.base *= std::conj(u[i][static_cast<std::size_t>(a)]) *
                              u[jt][static_cast<std::size_t>(a)];
                entry.half_sum_low.push_back(
                    flip_spatial(0.5 * (terms[i].momenta[static_cast<std::size_t>(a)] +
                                        terms[jt].momenta[static_cast<std::size_t>(a)])));
            }
            tensor.pairs_.push_back(std::move(entry));
        }
    }

    if (n <= CurrentTensor::dense_particle_limit) {
        std::size_t count = 1;
        for (int a = 0; a < n; ++a) count *= 4;
        tensor.dense_.resize(count);
        double max_im = 0.0, max_re = 0.0;
        std::vector<int> mu(static_cast<std::size_t>(n), 0);
        for (std::size_t flat = 0; flat < count; ++flat) {
            std::size_t rem = flat;
            for (int a = n - 1; a >= 0; --a) {
                mu[static_cast<std::size_t>(a)] = static_cast<int>(rem & 3u);
                rem >>= 2;
            }
            const Complex value = tensor.component_complex(mu);
            tensor.dense_[flat] = value.real();
            max_im = std::max(max_im, std::abs(value.imag()));
            max_re = std::max(max_re, std::abs(value.real()));
        }
        tensor.max_imag_ratio_ = max_re > 0.0 ? max_im / max_re : max_im;
    }
    return tensor;
}

Complex CurrentTensor::component_complex(std::span<const int> mu) const {
    if (static_cast<int>(mu.size()) != n_)
        throw std::invalid_argument("expected one tensor index per particle");
    for (int m : mu)
        if (m < 0 || m > 3) throw std::invalid_argument("tensor index out of range 0..3");
    Complex acc = 0.0;
    for (const PairEntry& entry : pairs_) {
        Complex f = entry.base;
        for (int a = 0; a < n_; ++a)
            f *= entry.half_sum_low[static_cast<std::size_t>(a)]
                                   [static_cast<std::size_t>(mu[static_cast<std::size_t>(a)])];
        acc += f;
    }
    return acc;
}

double CurrentTensor::component(std::span<const int> mu) const {
    if (is_dense()) {
        std::size_t flat = 0;
        for (int a = 0; a < n_; ++a)
            flat = (flat << 2) | static_cast<std::size_t>(mu[static_cast<std::size_t>(a)]);
        if (static_cast<int>(mu.size()) != n_)
            throw std::invalid_argument("expected one tensor index per particle");
        return dense_[flat];
    }
    return component_complex(mu).real();
}

double node_threshold(const MultiParticleWaveFunction& wf) {
    return 1e-12 * wf.mean_density();
}

FlowField::FlowField(const MultiParticleWaveFunction& wf) : wf_(&wf) {
    const int n = wf.particle_count();
    currents_.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) currents_.push_back(single_particle_current(wf, a));
    node_eps_ = kgflow::node_threshold(wf);
}

const SingleParticleCurrentField& FlowField::current(int particle) const {
    return currents_.at(static_cast<std::size_t>(particle));
}

std::optional<FourVector> FlowField::try_velocity(const Configuration& cfg,
                                                  int particle) const {
    const double rho = wf_->density(cfg);
    if (!(rho > node_eps_)) return std::nullopt;
    return (1.0 / rho) * current(particle).evaluate(cfg[static_cast<std::size_t>(particle)]);
}

FourVector FlowField::velocity(const Configuration& cfg, int particle) const {
    const auto v = try_velocity(cfg, particle);
    if (!v)
        throw node_error("velocity undefined: |psi|^2 = " + std::to_string(wf_->density(cfg)) +
                         " at or below node threshold " + std::to_string(node_eps_));
    return *v;
}

FourVector velocity_field(const MultiParticleWaveFunction& wf, const Configuration& cfg,
                          int particle) {
    const double rho = wf.density(cfg);
    if (!(rho > node_threshold(wf)))
        throw node_error("velocity undefined at a node of |psi|^2");
    return (1.0 / rho) *
           single_particle_current(wf, particle).evaluate(cfg[static_cast<std::size_t>(particle)]);
}

double continuity_residual(const FlowField& flow, const Configuration& cfg, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    const int n = flow.wave_function().particle_count();
    if (static_cast<int>(cfg.size()) != n)
        throw std::invalid_argument("configuration arity mismatch");

    // Flux component |psi|^2 v_a^mu evaluated through the literal product, so
    // the cancellation against the division inside v is exercised, not assumed.
    const auto flux = [&](const Configuration& at, int a, std::size_t mu) {
        const double rho = flow.density(at);
        if (!(rho > flow.node_threshold()))
            throw node_error("continuity residual requested within h of a node");
        const FourVector v =
            (1.0 / rho) * flow.current(a).evaluate(at[static_cast<std::size_t>(a)]);
        return rho * v[mu];
    };

    double acc = 0.0;
    for (int a = 0; a < n; ++a) {
        for (std::size_t mu = 0; mu < 4; ++mu) {
            Configuration plus = cfg, minus = cfg;
            plus[static_cast<std::size_t>(a)][mu] += h;
            minus[static_cast<std::size_t>(a)][mu] -= h;
            acc += (flux(plus, a, mu) - flux(minus, a, mu)) / (2.0 * h);
        }
    }
    return std::abs(acc);
}

}  // namespace kgflow
