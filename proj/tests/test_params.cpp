// Parameter plumbing: detunings, coupling magnitudes, the dressed/bare
// change of basis, and frequency-grid bookkeeping.
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "lambdasim/params.hpp"

using namespace lambdasim;

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
}

TEST_CASE("detunings shift by the lower-state splitting") {
    SystemParams p;
    p.omega21 = 1.0;
    const Detunings d = detunings(3.25, p);
    CHECK(d.delta == doctest::Approx(3.25).epsilon(1e-15));
    CHECK(d.delta_hat == doctest::Approx(4.25).epsilon(1e-15));

    p.omega21 = 0.0;
    const Detunings d0 = detunings(-2.0, p);
    CHECK(d0.delta == d0.delta_hat);
}

TEST_CASE("coupling magnitudes reproduce the partial widths") {
    SystemParams p;  // gamma1 = gamma2 = 0.5, flat density 1/(2 pi)
    const Couplings c = couplings_from_rates(p);
    // 2 pi D |g|^2 = gamma1 with D = 1/(2 pi) means |g| = sqrt(gamma1).
    CHECK(std::abs(c.g) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(std::abs(c.ghat) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    const PartialRates r = rates_from_couplings(c.g, c.ghat, p.density);
    CHECK(r.gamma1 == doctest::Approx(p.gamma1).epsilon(1e-14));
    CHECK(r.gamma2 == doctest::Approx(p.gamma2).epsilon(1e-14));

    p.phi_g = 0.8;
    p.phi_ghat = -1.3;
    const Couplings cp = couplings_from_rates(p);
    CHECK(std::arg(cp.g) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(std::arg(cp.ghat) == doctest::Approx(-1.3).epsilon(1e-14));
}

TEST_CASE("dressed transform maps a pure lower-state excitation to an equal split") {
    const DressedPair d = dressed_from_bare(cplx{0.0, 0.0}, cplx{1.0, 0.0}, 0.0);
    CHECK(std::abs(d.plus - cplx{0.0, -kInvSqrt2}) <= 1e-15);
    CHECK(std::abs(d.minus - cplx{0.0, kInvSqrt2}) <= 1e-15);

    const DressedPair dx = dressed_from_bare(cplx{1.0, 0.0}, cplx{0.0, 0.0}, 1.234);
    CHECK(std::abs(dx.plus - cplx{kInvSqrt2, 0.0}) <= 1e-15);
    CHECK(std::abs(dx.minus - cplx{kInvSqrt2, 0.0}) <= 1e-15);
}

TEST_CASE("dressed transform is unitary and invertible for random inputs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const cplx x{u(rng), u(rng)}, y{u(rng), u(rng)};
        const double phi = 3.2 * u(rng);
        const DressedPair d = dressed_from_bare(x, y, phi);
        CHECK(std::norm(d.plus) + std::norm(d.minus) ==
              doctest::Approx(std::norm(x) + std::norm(y)).epsilon(1e-13));
        const BarePair b = bare_from_dressed(d.plus, d.minus, phi);
        CHECK(std::abs(b.x_amp - x) <= 1e-13);
        CHECK(std::abs(b.y_amp - y) <= 1e-13);
    }
}

TEST_CASE("parameter validation rejects nonsense") {
    SystemParams p;
    p.gamma1 = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = SystemParams{};
    p.gamma1 = 0.0;
    p.gamma2 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = SystemParams{};
    p.omega21 = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = SystemParams{};
    p.gbar_mag = -0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = SystemParams{};
    p.density = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    CHECK_NOTHROW(SystemParams{}.validate());
}

TEST_CASE("frequency grid: spacing, samples and validation") {
    const FrequencyGrid g{-40.0, 40.0, 4001};
    CHECK(g.spacing() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(g.omega(0) == doctest::Approx(-40.0));
    CHECK(g.omega(4000) == doctest::Approx(40.0).epsilon(1e-14));
    CHECK(g.omega(2000) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_NOTHROW(g.validate());

    CHECK_THROWS_AS((FrequencyGrid{0.0, 1.0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((FrequencyGrid{2.0, 1.0, 11}.validate()), std::invalid_argument);
    CHECK(FrequencyGrid{-1.0, 1.0, 3} == FrequencyGrid{-1.0, 1.0, 3});
    CHECK_FALSE(FrequencyGrid{-1.0, 1.0, 3} == FrequencyGrid{-1.0, 1.0, 5});
}
