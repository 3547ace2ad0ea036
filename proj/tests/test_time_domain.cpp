// RK4 oracle behavior: agreement with the closed form, invariances, guard
// rails, and the discrete-bath validation layer.
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "lambdasim/blocks.hpp"
#include "lambdasim/errors.hpp"
#include "lambdasim/field_state.hpp"
#include "lambdasim/spectrum.hpp"
#include "lambdasim/time_domain.hpp"

using namespace lambdasim;

namespace {

double max_mag_diff(const SteadyAmplitudes& a, const SteadyAmplitudes& b, bool relative) {
    REQUIRE(a.blocks.size() == b.blocks.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.blocks.size(); ++k)
        for (int i = 0; i < a.grid.count; ++i) {
            const auto& ma = a.mags[k][static_cast<std::size_t>(i)];
            const auto& mb = b.mags[k][static_cast<std::size_t>(i)];
            double dp = std::abs(ma.plus - mb.plus);
            double dm = std::abs(ma.minus - mb.minus);
            if (relative) {
                if (mb.plus > 0.0) dp /= mb.plus;
                if (mb.minus > 0.0) dm /= mb.minus;
            }
            worst = std::max({worst, dp, dm});
        }
    return worst;
}

}  // namespace

TEST_CASE("upper-state amplitude follows the exponential-decay law") {
    SystemParams p;
    p.gamma1 = 0.3;
    p.gamma2 = 0.5;
    const cplx c0{0.6, -0.2};
    const cplx at2 = upper_state_amplitude(c0, 2.0, p);
    CHECK(std::abs(at2 - c0 * std::exp(-0.4 * 2.0)) <= 1e-15);
    CHECK(std::abs(upper_state_amplitude(c0, 0.0, p) - c0) <= 1e-15);
}

TEST_CASE("direct integration reproduces the closed-form magnitudes") {
    SystemParams p;
    p.gbar_mag = 0.8;
    p.phi = 0.6;
    const FieldState state = FieldState::single_fock(2);
    const FrequencyGrid grid{-3.0, 3.0, 25};

    const SteadyAmplitudes fast = steady_amplitudes(state, p, grid, 2);
    const IntegratorConfig cfg;  // defaults
    const SteadyAmplitudes slow =
        steady_magnitudes_from_bare(integrate_bare(state, p, grid, cfg, 2));

    CHECK(max_mag_diff(fast, slow, /*relative=*/true) <= 1e-6);
}

TEST_CASE("integration touches photon number zero correctly") {
    // n = 0 exercises the unpaired |1,0> slot alongside the m = 0 pair.
    SystemParams p;
    p.gbar_mag = 0.5;
    const FieldState state = FieldState::single_fock(0);
    const FrequencyGrid grid{-2.0, 2.0, 9};
    const SteadyAmplitudes fast = steady_amplitudes(state, p, grid, 1);
    const SteadyAmplitudes slow =
        steady_magnitudes_from_bare(integrate_bare(state, p, grid, IntegratorConfig{}, 2));
    CHECK(max_mag_diff(fast, slow, /*relative=*/false) <= 1e-8);
}

TEST_CASE("a global state phase leaves every magnitude unchanged") {
    SystemParams p;
    p.gbar_mag = 0.7;
    const std::vector<cplx> amps{cplx{0.6, 0.0}, cplx{0.0, 0.8}};
    std::vector<cplx> rotated = amps;
    for (cplx& a : rotated) a *= std::polar(1.0, 1.234);

    const FrequencyGrid grid{-1.0, 2.0, 7};
    const SteadyAmplitudes base =
        steady_magnitudes_from_bare(integrate_bare(FieldState::raw(4, amps), p, grid,
                                                   IntegratorConfig{}, 2));
    const SteadyAmplitudes rot =
        steady_magnitudes_from_bare(integrate_bare(FieldState::raw(4, rotated), p, grid,
                                                   IntegratorConfig{}, 2));
    CHECK(max_mag_diff(base, rot, /*relative=*/false) <= 1e-13);
}

TEST_CASE("source masks split the two emission pathways") {
    SystemParams p;
    p.gbar_mag = 0.6;
    const FieldState state = FieldState::single_fock(1);
    const FrequencyGrid grid{-2.5, 2.5, 11};
    const IntegratorConfig cfg;

    Spectrum g_only = spectrum_from_bare(
        integrate_bare(state, p, grid, cfg, 2, SourceMask::g_only), p);
    const Spectrum ghat_only = spectrum_from_bare(
        integrate_bare(state, p, grid, cfg, 2, SourceMask::ghat_only), p);
    for (std::size_t i = 0; i < g_only.values.size(); ++i)
        g_only.values[i] += ghat_only.values[i];

    SystemParams p_off = p;
    p_off.interference = false;
    const Spectrum expected =
        assemble_spectrum(steady_amplitudes(state, p_off, grid, 1), p_off);
    double worst = 0.0;
    for (std::size_t i = 0; i < expected.values.size(); ++i)
        worst = std::max(worst, std::abs(g_only.values[i] - expected.values[i]));
    CHECK(worst <= 1e-7);
}

TEST_CASE("integrator guard rails reject unusable setups") {
    SystemParams p;
    const FieldState state = FieldState::single_fock(1);
    const FrequencyGrid grid{-1.0, 1.0, 3};

    IntegratorConfig too_short;
    too_short.t_end = 10.0;  // below the hard floor t_end * gamma >= 20
    CHECK_THROWS_AS(integrate_bare(state, p, grid, too_short, 1), std::invalid_argument);

    IntegratorConfig too_coarse;
    too_coarse.dt = 0.5;  // above the 0.05 / rate cap
    CHECK_THROWS_AS(integrate_bare(state, p, grid, too_coarse, 1), std::invalid_argument);
}

TEST_CASE("an unconverged run is rejected with its worst offender") {
    SystemParams p;
    p.gbar_mag = 0.5;
    const FieldState state = FieldState::single_fock(1);
    const FrequencyGrid grid{-1.0, 1.0, 5};
    IntegratorConfig cfg;
    cfg.t_end = 20.0;  // legal horizon, but the tail still moves at 1e-8
    bool threw = false;
    try {
        (void)integrate_bare(state, p, grid, cfg, 2);
    } catch (const NonConvergenceError& e) {
        threw = true;
        CHECK(e.worst_drift > cfg.stationarity_tol);
        CHECK(e.block_m >= 0);
        CHECK(std::abs(e.detuning) <= 1.0 + 1e-12);
    }
    CHECK(threw);
}

TEST_CASE("thread count never changes integration results") {
    SystemParams p;
    p.gbar_mag = 0.9;
    const FieldState state = FieldState::single_fock(3);
    const FrequencyGrid grid{-1.5, 1.5, 8};
    const BareAmplitudes one = integrate_bare(state, p, grid, IntegratorConfig{}, 1);
    const BareAmplitudes four = integrate_bare(state, p, grid, IntegratorConfig{}, 4);
    for (int i = 0; i < grid.count; ++i)
        for (int n = one.x_lo; n <= one.x_hi; ++n) {
            CHECK(one.X(i, n) == four.X(i, n));  // bitwise: disjoint slots
        }
}

TEST_CASE("discrete bath honors its recurrence guard") {
    SystemParams p;
    FullBathConfig cfg;
    cfg.n_modes = 4;  // spacing 20 -> recurrence at ~0.3, far below t_end
    CHECK_THROWS_AS(full_bath_simulate(FieldState::single_fock(0), p, cfg), ConfigError);
}

TEST_CASE("discrete bath smoke run decays exponentially and conserves norm") {
    SystemParams p;
    p.gbar_mag = 0.4;
    FullBathConfig cfg;
    cfg.n_modes = 200;
    cfg.span = 40.0;
    cfg.t_end = 4.0;
    const FullBathResult r = full_bath_simulate(FieldState::single_fock(1), p, cfg);

    REQUIRE(!r.times.empty());
    CHECK(r.times.front() == 0.0);
    CHECK(r.upper_population.front() == doctest::Approx(1.0).epsilon(1e-12));
    double worst = 0.0;
    for (std::size_t i = 0; i < r.times.size(); ++i)
        worst = std::max(worst,
                         std::abs(r.upper_population[i] - std::exp(-p.gamma() * r.times[i])));
    CHECK(worst <= 0.05);
    CHECK(r.total_norm_drift <= 1e-6);
    CHECK(r.mode_detunings.size() == 200);
    CHECK(r.spectrum.size() == 200);
}
