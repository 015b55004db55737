#include <cmath>
#include <random>

#include "doctest.h"
#include "kgflow/wavefunction.hpp"
#include "oracles.hpp"
#include "test_scenarios.hpp"

using namespace kgflow;
using namespace kgtest;

namespace {
const double V = std::pow(2.0 * pi, 3);
}

TEST_CASE("plane-wave evaluation matches hand values") {
    const auto wf = single_mode();

    SUBCASE("rest mode at the origin") {
        const Complex psi = wf.evaluate(Configuration{{FourVector{}}});
        CHECK(psi.real() == doctest::Approx(1.0 / std::sqrt(V)).epsilon(1e-14));
        CHECK(psi.imag() == 0.0);
    }
    SUBCASE("pure phase along the time axis") {
        for (double t : {0.3, 1.7, 9.2}) {
            const Complex psi = wf.evaluate(Configuration{{FourVector{t, 0, 0, 0}}});
            CHECK(std::abs(psi) == doctest::Approx(1.0 / std::sqrt(V)).epsilon(1e-14));
            CHECK(psi.real() == doctest::Approx(std::cos(t) / std::sqrt(V)));
            CHECK(psi.imag() == doctest::Approx(-std::sin(t) / std::sqrt(V)));
        }
    }
    SUBCASE("two-term superposition at the origin") {
        const auto two = two_mode();
        const Complex psi = two.evaluate(Configuration{{FourVector{}}});
        const double expected =
            (1.0 / std::sqrt(2.0)) * (1.0 / std::sqrt(V)) * (1.0 + std::pow(2.0, -0.25));
        CHECK(psi.real() == doctest::Approx(expected).epsilon(1e-14));
        CHECK(psi.imag() == doctest::Approx(0.0));
    }
}

TEST_CASE("gradient is the plane-wave derivative") {
    const auto wf = single_mode();
    const Configuration origin{{FourVector{}}};

    SUBCASE("rest mode at the origin") {
        const auto g = wf.gradient(origin, 0);
        const Complex psi = wf.evaluate(origin);
        CHECK(g[0] == Complex{0.0, -1.0} * psi);
        CHECK(std::abs(g[1]) == 0.0);
        CHECK(std::abs(g[2]) == 0.0);
        CHECK(std::abs(g[3]) == 0.0);
    }
    SUBCASE("factor -i k_mu with the index lowered") {
        const auto wf2 = two_mode();
        const Configuration cfg{{FourVector{0.7, 1.1, -0.4, 2.0}}};
        // Single-mode piece checked against each stored term.
        for (const auto& term : wf2.terms()) {
            MultiParticleWaveFunction one(wf2.box(), {1.0},
                                          {{term.coeff, {term.modes[0].n}}});
            const auto g = one.gradient(cfg, 0);
            const Complex psi = one.evaluate(cfg);
            const FourVector k_low = flip_spatial(term.momenta[0]);
            for (std::size_t mu = 0; mu < 4; ++mu) {
                const Complex expect = Complex{0.0, -1.0} * k_low[mu] * psi;
                CHECK(std::abs(g[mu] - expect) <= 1e-14 * std::abs(psi));
            }
        }
    }
}

TEST_CASE("gradient matches central finite differences") {
    const auto wf = five_term_2p();
    const auto f = [&](const Configuration& c) { return wf.evaluate(c); };
    const auto configs = random_box_configs(wf.box(), 2, 20, 101);
    for (const auto& cfg : configs) {
        for (int a = 0; a < 2; ++a) {
            const auto g = wf.gradient(cfg, a);
            for (int mu = 0; mu < 4; ++mu) {
                const Complex fd5 = central_diff(f, cfg, a, mu, 1e-5);
                const Complex fd4 = central_diff(f, cfg, a, mu, 1e-4);
                const double scale = std::max(std::abs(g[static_cast<std::size_t>(mu)]), 1e-6);
                CHECK(std::abs(g[static_cast<std::size_t>(mu)] - fd5) / scale < 1e-8);
                CHECK(std::abs(g[static_cast<std::size_t>(mu)] - fd4) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("density") {
    SUBCASE("single mode is uniform 1/(k0 V)") {
        const auto wf = single_mode();
        for (const auto& cfg : random_box_configs(wf.box(), 1, 25, 5))
            CHECK(wf.density(cfg) == doctest::Approx(1.0 / V).epsilon(1e-13));
    }
    SUBCASE("consistent with evaluate and nonnegative") {
        const auto wf = two_mode();
        for (const auto& cfg : random_box_configs(wf.box(), 1, 25, 6)) {
            const double rho = wf.density(cfg);
            CHECK(rho >= 0.0);
            CHECK(rho == doctest::Approx(std::norm(wf.evaluate(cfg))));
        }
    }
    SUBCASE("standing-wave node cancels exactly") {
        const double r = 1.0 / std::sqrt(2.0);
        MultiParticleWaveFunction wf(unit_box(), {1.0},
                                     {{Complex{r, 0.0}, {{1, 0, 0}}},
                                      {Complex{-r, 0.0}, {{-1, 0, 0}}}});
        const Configuration node{{FourVector{2.3, 0.0, 0.0, 0.0}}};
        CHECK(wf.density(node) == 0.0);
    }
}

TEST_CASE("Klein-Gordon residual vanishes to differencing accuracy") {
    const auto wf = five_term_2p();
    for (const auto& cfg : random_box_configs(wf.box(), 2, 20, 77)) {
        for (int a = 0; a < 2; ++a)
            CHECK(kg_residual_oracle(wf, cfg, a, 1e-3) < 1e-4);
    }
}

TEST_CASE("KG norm") {
    SUBCASE("orthonormal coefficients add in quadrature") {
        CHECK(single_mode().kg_norm() == doctest::Approx(1.0));
        MultiParticleWaveFunction wf(unit_box(), {1.0},
                                     {{Complex{1.0 / std::sqrt(2.0), 0.0}, {{0, 0, 0}}},
                                      {Complex{0.0, 1.0 / std::sqrt(2.0)}, {{1, 0, 0}}}});
        CHECK(wf.kg_norm() == doctest::Approx(1.0).epsilon(1e-14));
        MultiParticleWaveFunction big(unit_box(), {1.0}, {{Complex{2.0, 0.0}, {{0, 0, 0}}}});
        CHECK(big.kg_norm() == doctest::Approx(4.0));
        CHECK(big.normalized_kg().kg_norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("3-4-5 normalization") {
        MultiParticleWaveFunction wf(unit_box(), {1.0},
                                     {{Complex{3.0, 0.0}, {{0, 0, 0}}},
                                      {Complex{4.0, 0.0}, {{1, 0, 0}}}});
        const auto unit = wf.normalized_kg();
        for (const auto& term : unit.terms()) {
            if (term.modes[0].n == std::array<int, 3>{0, 0, 0})
                CHECK(term.coeff.real() == doctest::Approx(0.6));
            else
                CHECK(term.coeff.real() == doctest::Approx(0.8));
        }
    }
    SUBCASE("idempotent normalization") {
        const auto wf = two_mode().normalized_kg();
        const auto again = wf.normalized_kg();
        CHECK(again.kg_norm() == doctest::Approx(wf.kg_norm()).epsilon(1e-14));
    }
    SUBCASE("independent of the hypersurface times") {
        std::mt19937 rng(13);
        std::uniform_real_distribution<double> u(0.0, 12.0);
        const auto wf5 = five_term_2p();
        const double base = wf5.kg_norm();
        for (int trial = 0; trial < 10; ++trial) {
            const std::vector<double> times{u(rng), u(rng)};
            CHECK(std::abs(wf5.kg_norm_at_times(times) - base) < 1e-12);
        }
    }
}

TEST_CASE("spacetime normalization N") {
    const double T = 12.0;

    SUBCASE("single mode: N = T / k0") {
        CHECK(single_mode(T).spacetime_norm() == doctest::Approx(T).epsilon(1e-14));
    }
    SUBCASE("orthogonal modes: weighted sum of T / k0") {
        const auto wf = two_mode(T);
        const double expected = (T / 2.0) * (1.0 + 1.0 / std::sqrt(2.0));
        CHECK(wf.spacetime_norm() == doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("product state factorizes") {
        const auto wf = product_2p(T);
        CHECK(wf.spacetime_norm() ==
              doctest::Approx(T * T / std::sqrt(2.0)).epsilon(1e-14));
    }
    SUBCASE("matches brute-force quadrature") {
        const auto wf = two_mode(T);
        const double quad = box_quadrature(
            wf, 10, [&](const Configuration& c) { return wf.density(c); });
        CHECK(quad == doctest::Approx(wf.spacetime_norm()).epsilon(0.01));
    }
    SUBCASE("normalize_spacetime") {
        CHECK(single_mode(1.0).spacetime_norm() == doctest::Approx(1.0));
        const auto scaled = single_mode(4.0).normalized_spacetime();
        CHECK(scaled.spacetime_norm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(scaled.terms()[0].coeff.real() == doctest::Approx(0.5).epsilon(1e-14));
        const auto once = two_mode().normalized_spacetime();
        const auto twice = once.normalized_spacetime();
        CHECK(twice.terms()[0].coeff.real() ==
              doctest::Approx(once.terms()[0].coeff.real()).epsilon(1e-14));
        CHECK(once.spacetime_norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("mean density of the single mode is 1/V") {
        CHECK(single_mode(T).mean_density() == doctest::Approx(1.0 / V).epsilon(1e-13));
    }
}

TEST_CASE("construction rules") {
    SUBCASE("arity mismatch at evaluation") {
        const auto wf = product_2p();
        CHECK_THROWS_AS(wf.evaluate(Configuration{{FourVector{}}}), std::invalid_argument);
        CHECK_THROWS_AS(wf.gradient(Configuration{{FourVector{}, FourVector{}}}, 5),
                        std::invalid_argument);
    }
    SUBCASE("duplicate tuples merge") {
        MultiParticleWaveFunction wf(unit_box(), {1.0},
                                     {{Complex{0.25, 0.0}, {{0, 0, 0}}},
                                      {Complex{0.75, 0.0}, {{0, 0, 0}}}});
        CHECK(wf.terms().size() == 1);
        CHECK(wf.terms()[0].coeff.real() == doctest::Approx(1.0));
    }
    SUBCASE("cancelled state is rejected") {
        CHECK_THROWS_AS(MultiParticleWaveFunction(unit_box(), {1.0},
                                                  {{Complex{1.0, 0.0}, {{0, 0, 0}}},
                                                   {Complex{-1.0, 0.0}, {{0, 0, 0}}}}),
                        std::invalid_argument);
    }
    SUBCASE("negative mass is rejected") {
        CHECK_THROWS_AS(MultiParticleWaveFunction(unit_box(), {-1.0},
                                                  {{Complex{1.0, 0.0}, {{0, 0, 0}}}}),
                        std::invalid_argument);
    }
}
