// Drive-field state constructors: weights, phase ramps, windows, and the
// guard rails on truncation and invalid shapes.
#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "lambdasim/errors.hpp"
#include "lambdasim/field_state.hpp"

using namespace lambdasim;

TEST_CASE("single occupation number state") {
    const FieldState s = FieldState::single_fock(400);
    CHECK(s.n_min() == 400);
    CHECK(s.n_max() == 400);
    CHECK(std::abs(s.amp(400) - cplx{1.0, 0.0}) <= 1e-15);
    CHECK(s.amp(399) == cplx{0.0, 0.0});
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(FieldState::single_fock(-1), std::invalid_argument);
}

TEST_CASE("poisson-weighted state: normalization and a frozen coefficient") {
    // Frozen against an independent evaluation of
    // exp(-|a|^2/2) a^n / sqrt(n!) at |a| = 2, n = 4, renormalized over the
    // |a|^2 +- 12|a| window (discarded mass ~1e-15).
    const FieldState s = FieldState::coherent(2.0, 0.0, 12.0);
    CHECK(s.n_min() == 0);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.amp(4).real() == doctest::Approx(0.44200318416631901).epsilon(1e-12));
    CHECK(s.amp(4).imag() == doctest::Approx(0.0));

    // The mean of the weight distribution sits at |a|^2.
    double mean = 0.0;
    for (int n = s.n_min(); n <= s.n_max(); ++n) mean += n * std::norm(s.amp(n));
    CHECK(mean == doctest::Approx(4.0).epsilon(1e-9));

    // The phase ramp advances linearly in n.
    const FieldState sp = FieldState::coherent(2.0, 0.7, 12.0);
    CHECK(std::arg(sp.amp(5) / sp.amp(4)) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(std::abs(sp.amp(4)) == doctest::Approx(std::abs(s.amp(4))).epsilon(1e-13));
}

TEST_CASE("poisson-weighted state rejects lossy truncation windows") {
    // At |a| = 2 the +-6 sigma window still discards ~1e-6 > the 1e-8 gate.
    CHECK_THROWS_AS(FieldState::coherent(2.0, 0.0, 6.0), TruncationError);
    CHECK_THROWS_AS(FieldState::coherent(2.0, 0.0, 4.0), TruncationError);
    CHECK_NOTHROW(FieldState::coherent(2.0, 0.0, 12.0));
    // Large mean photon numbers are fine at the default width.
    CHECK_NOTHROW(FieldState::coherent(20.0, 0.0));

    CHECK_THROWS_AS(FieldState::coherent(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("adjacent window state: equal weights with an offset phase ramp") {
    const double phase = 0.9;
    const FieldState s = FieldState::adjacent_window(400, 1, phase);
    CHECK(s.n_min() == 399);
    CHECK(s.n_max() == 401);
    const double w = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(s.amp(400) - cplx{w, 0.0}) <= 1e-15);
    CHECK(std::abs(s.amp(401) - std::polar(w, phase)) <= 1e-15);
    CHECK(std::abs(s.amp(399) - std::polar(w, -phase)) <= 1e-15);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));

    // Width 0 degenerates to a single number state.
    const FieldState s0 = FieldState::adjacent_window(5, 0, 2.0);
    CHECK(s0.n_min() == 5);
    CHECK(s0.n_max() == 5);

    CHECK_THROWS_AS(FieldState::adjacent_window(2, 3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FieldState::adjacent_window(4, -1, 0.0), std::invalid_argument);
}

TEST_CASE("separated number state: gaps preserved, no adjacent pairs") {
    const FieldState s = FieldState::separated_fock(400, {0, 2, 4}, 0.5);
    CHECK(s.n_min() == 400);
    CHECK(s.n_max() == 404);
    const double w = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(s.amp(400) - cplx{w, 0.0}) <= 1e-15);
    CHECK(std::abs(s.amp(402) - std::polar(w, 2.0 * 0.5)) <= 1e-15);
    CHECK(s.amp(401) == cplx{0.0, 0.0});
    CHECK(s.amp(403) == cplx{0.0, 0.0});
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));

    // Negative offsets are allowed as long as the numbers stay >= 0.
    CHECK_NOTHROW(FieldState::separated_fock(10, {-2, 0, 2}, 0.0));
    CHECK_THROWS_AS(FieldState::separated_fock(1, {-2, 0}, 0.0), std::invalid_argument);
    // Adjacent numbers would couple through a shared ladder rung.
    CHECK_THROWS_AS(FieldState::separated_fock(400, {0, 1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FieldState::separated_fock(400, {}, 0.0), std::invalid_argument);
    // Duplicate offsets are also rejected (separation 0).
    CHECK_THROWS_AS(FieldState::separated_fock(400, {0, 0, 2}, 0.0), std::invalid_argument);
}

TEST_CASE("raw states carry amplitudes verbatim") {
    const FieldState s = FieldState::raw(3, {cplx{0.5, 0.0}, cplx{0.0, -0.5}});
    CHECK(s.n_min() == 3);
    CHECK(s.n_max() == 4);
    CHECK(s.norm_sq() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.amp(4) == cplx{0.0, -0.5});

    CHECK_THROWS_AS(FieldState::raw(-1, {cplx{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(FieldState::raw(0, {}), std::invalid_argument);
}
