#include "kgflow/marginals.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace kgflow {

namespace {

Complex unit(double phase) { return {std::cos(phase), std::sin(phase)}; }

// Antiderivative of exp(i w xi) at xi (w != 0).
Complex anti0(double w, double xi) { return unit(w * xi) / Complex{0.0, w}; }

// Antiderivative of xi exp(i w xi) at xi (w != 0).
Complex anti1(double w, double xi) {
    return unit(w * xi) * Complex{1.0 / (w * w), -xi / w};
}

// Antiderivative of xi^2 exp(i w xi) at xi (w != 0).
Complex anti2(double w, double xi) {
    return unit(w * xi) * Complex{2.0 * xi / (w * w), -xi * xi / w + 2.0 / (w * w * w)};
}

// Integral of t^power exp(i dk0 t) over [lo, hi].
Complex time_integral(double dk0, int power, double lo, double hi) {
    if (dk0 == 0.0) {
        switch (power) {
            case 0: return {hi - lo, 0.0};
            case 1: return {(hi * hi - lo * lo) / 2.0, 0.0};
            default: return {(hi * hi * hi - lo * lo * lo) / 3.0, 0.0};
        }
    }
    switch (power) {
        case 0: return anti0(dk0, hi) - anti0(dk0, lo);
        case 1: return anti1(dk0, hi) - anti1(dk0, lo);
        default: return anti2(dk0, hi) - anti2(dk0, lo);
    }
}

}  // namespace

TimeWindows TimeWindows::full_box(const MultiParticleWaveFunction& wf) {
    TimeWindows tw;
    tw.windows.assign(static_cast<std::size_t>(wf.particle_count()),
                      {wf.box().time_min(), wf.box().time_max()});
    return tw;
}

CoordinateMarginal CoordinateMarginal::build(const MultiParticleWaveFunction& wf, int particle,
                                             int mu, const TimeWindows& windows) {
    const int n = wf.particle_count();
    if (particle < 0 || particle >= n) throw std::invalid_argument("particle index out of range");
    if (mu < 0 || mu > 3) throw std::invalid_argument("coordinate index out of range");
    if (static_cast<int>(windows.windows.size()) != n)
        throw std::invalid_argument("expected one time window per particle");

    CoordinateMarginal marginal;
    if (mu == 0) {
        marginal.lo_ = windows.of(particle)[0];
        marginal.hi_ = windows.of(particle)[1];
    } else {
        marginal.lo_ = wf.box().origin[static_cast<std::size_t>(mu)];
        marginal.hi_ = marginal.lo_ + wf.box().L;
    }
    if (!(marginal.hi_ > marginal.lo_)) throw std::invalid_argument("empty marginal support");

    const double theta = 2.0 * pi / wf.box().L;
    const auto& terms = wf.terms();
    std::map<int, Complex> buckets;  // keyed by integer harmonic of the kept coordinate

    for (const auto& ti : terms) {
        for (const auto& tj : terms) {
            Complex amp = std::conj(ti.coeff) * tj.coeff;
            bool alive = true;
            int harmonic = 0;
            for (int b = 0; b < n && alive; ++b) {
                const Mode& mi = ti.modes[static_cast<std::size_t>(b)];
                const Mode& mj = tj.modes[static_cast<std::size_t>(b)];
                const double k0i = ti.momenta[static_cast<std::size_t>(b)].t;
                const double k0j = tj.momenta[static_cast<std::size_t>(b)].t;
                const double dk0 = k0i - k0j;
                const auto& win = windows.of(b);
                if (b != particle) {
                    // Spectator: full spatial period and its own time window.
                    alive = mi.n == mj.n;
                    if (!alive) break;
                    amp *= time_integral(dk0, 0, win[0], win[1]) / std::sqrt(k0i * k0j);
                    continue;
                }
                if (mu == 0) {
                    // Keep t: integrate the particle's own spatial coordinates
                    // over full periods, which forces equal momenta.
                    alive = mi.n == mj.n;
                    if (!alive) break;
                    amp *= 1.0 / std::sqrt(k0i * k0j);
                    harmonic = 0;  // dk0 vanishes with equal momenta
                } else {
                    // Keep one spatial coordinate: the other two must agree;
                    // the time integral runs over the window.
                    for (int d = 0; d < 3; ++d) {
                        if (d == mu - 1) continue;
                        if (mi.n[static_cast<std::size_t>(d)] != mj.n[static_cast<std::size_t>(d)])
                            alive = false;
                    }
                    if (!alive) break;
                    amp *= time_integral(dk0, 0, win[0], win[1]) /
                           (std::sqrt(k0i * k0j) * wf.box().L);
                    // Density carries exp(-i dk_mu xi); key by the integer step.
                    harmonic = -(mi.n[static_cast<std::size_t>(mu - 1)] -
                                 mj.n[static_cast<std::size_t>(mu - 1)]);
                }
            }
            if (alive) buckets[harmonic] += amp;
        }
    }

    marginal.constant_ = buckets[0].real();
    for (const auto& [key, amp] : buckets) {
        if (key == 0) continue;
        if (amp == Complex{}) continue;
        marginal.harmonics_.push_back({amp, theta * static_cast<double>(key)});
    }

    double total = marginal.constant_ * (marginal.hi_ - marginal.lo_);
    for (const auto& h : marginal.harmonics_)
        total += (h.amp * (anti0(h.omega, marginal.hi_) - anti0(h.omega, marginal.lo_))).real();
    marginal.total_ = total;
    return marginal;
}

double CoordinateMarginal::density(double xi) const {
    double d = constant_;
    for (const auto& h : harmonics_) d += (h.amp * unit(h.omega * xi)).real();
    return d;
}

double CoordinateMarginal::cdf(double xi) const {
    if (xi <= lo_) return 0.0;
    if (xi >= hi_) return 1.0;
    double acc = constant_ * (xi - lo_);
    for (const auto& h : harmonics_)
        acc += (h.amp * (anti0(h.omega, xi) - anti0(h.omega, lo_))).real();
    const double f = acc / total_;
    return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

double CoordinateMarginal::mean() const {
    double m1 = constant_ * (hi_ * hi_ - lo_ * lo_) / 2.0;
    for (const auto& h : harmonics_)
        m1 += (h.amp * (anti1(h.omega, hi_) - anti1(h.omega, lo_))).real();
    return m1 / total_;
}

double CoordinateMarginal::variance() const {
    double m2 = constant_ * (hi_ * hi_ * hi_ - lo_ * lo_ * lo_) / 3.0;
    for (const auto& h : harmonics_)
        m2 += (h.amp * (anti2(h.omega, hi_) - anti2(h.omega, lo_))).real();
    const double mu = mean();
    return m2 / total_ - mu * mu;
}

Complex pair_expectation(const MultiParticleWaveFunction& wf, const TimeWindows& windows,
                         std::span<const SlotWeight> weights) {
    const int n = wf.particle_count();
    if (static_cast<int>(weights.size()) != n)
        throw std::invalid_argument("expected one slot weight per particle");
    if (static_cast<int>(windows.windows.size()) != n)
        throw std::invalid_argument("expected one time window per particle");

    Complex acc = 0.0;
    for (const auto& ti : wf.terms()) {
        for (const auto& tj : wf.terms()) {
            Complex f = std::conj(ti.coeff) * tj.coeff;
            bool alive = true;
            for (int b = 0; b < n && alive; ++b) {
                const Mode& mi = ti.modes[static_cast<std::size_t>(b)];
                const Mode& mj = tj.modes[static_cast<std::size_t>(b)];
                const SlotWeight& w = weights[static_cast<std::size_t>(b)];
                // x axis picks up the weight harmonic; y and z must agree.
                alive = (mi.n[0] - mj.n[0] == w.x_harmonic) && mi.n[1] == mj.n[1] &&
                        mi.n[2] == mj.n[2];
                if (!alive) break;
                const double k0i = ti.momenta[static_cast<std::size_t>(b)].t;
                const double k0j = tj.momenta[static_cast<std::size_t>(b)].t;
                const auto& win = windows.of(b);
                f *= time_integral(k0i - k0j, w.t_power, win[0], win[1]) / std::sqrt(k0i * k0j);
            }
            if (alive) acc += f;
        }
    }
    return acc;
}

}  // namespace kgflow
