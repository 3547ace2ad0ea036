// params.hpp — System parameters, detunings, vacuum couplings and the
// bare/dressed change of basis for a three-level Lambda emitter whose two
// lower states are bridged by a quantized drive.
//
// Conventions used throughout the library:
//   * all rates and frequencies are expressed in units of the total upper
//     state width gamma = gamma1 + gamma2 (so gamma == 1 in default setups);
//   * the 3->1 transition frequency defines the frequency origin, so the
//     spectral variable is the detuning delta = omega - omega31 with
//     omega31 == 0;
//   * omega21 >= 0 is the lower-state splitting, which puts the 3->2 line at
//     delta = -omega21 (delta_hat = delta + omega21 vanishes on that line).
#pragma once

#include <complex>
#include <numbers>

namespace lambdasim {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Flat density of vacuum modes used by the default parameter set; with this
// choice |g| = sqrt(gamma1) and |ghat| = sqrt(gamma2).
inline constexpr double kDefaultDensity = 1.0 / kTwoPi;

struct SystemParams {
    double gamma1{0.5};    // partial width of the 3->1 decay
    double gamma2{0.5};    // partial width of the 3->2 decay
    double omega21{1.0};   // lower-state splitting (>= 0)
    double gbar_mag{0.25}; // drive coupling magnitude |gbar|
    double phi{0.0};       // drive phase arg(gbar)
    double phi_g{0.0};     // vacuum coupling phase arg(g)
    double phi_ghat{0.0};  // vacuum coupling phase arg(ghat)
    double density{kDefaultDensity};  // flat mode density D
    bool interference{true};  // parallel dipoles: keep the cross pathway terms

    double gamma() const { return gamma1 + gamma2; }

    // Throws std::invalid_argument on nonsensical values.
    void validate() const;
};

// Both detunings of a frequency sample: delta relative to the 3->1 line and
// delta_hat = delta + omega21 relative to the 3->2 line.
struct Detunings {
    double delta{0.0};
    double delta_hat{0.0};
};

Detunings detunings(double omega, const SystemParams& p);

// Vacuum coupling constants reproducing the requested partial widths under a
// flat continuum: gamma_i = 2*pi*D*|coupling|^2.
struct Couplings {
    cplx g;     // 3->1 pathway
    cplx ghat;  // 3->2 pathway
};

Couplings couplings_from_rates(const SystemParams& p);

// Inverse of couplings_from_rates on magnitudes: partial widths produced by a
// pair of couplings under mode density `density`.
struct PartialRates {
    double gamma1{0.0};
    double gamma2{0.0};
};

PartialRates rates_from_couplings(const cplx& g, const cplx& ghat, double density);

// Lower-state superpositions that diagonalize the drive block:
//   |+> = (|1,n+1> + i e^{i phi} |2,n>)/sqrt(2)
//   |-> = (|1,n+1> - i e^{i phi} |2,n>)/sqrt(2)
// `x_amp` is the coefficient on the |1,n+1> member, `y_amp` the coefficient
// on the |2,n> member of a rung.
struct DressedPair {
    cplx plus;
    cplx minus;
};

struct BarePair {
    cplx x_amp;  // |1,n+1> coefficient
    cplx y_amp;  // |2,n>   coefficient
};

DressedPair dressed_from_bare(const cplx& x_amp, const cplx& y_amp, double phi);
BarePair bare_from_dressed(const cplx& plus, const cplx& minus, double phi);

// Uniform detuning grid, endpoints included.
struct FrequencyGrid {
    double lo{-40.0};
    double hi{40.0};
    int count{4001};

    void validate() const;  // throws std::invalid_argument
    double spacing() const { return (hi - lo) / static_cast<double>(count - 1); }
    double omega(int i) const { return lo + static_cast<double>(i) * spacing(); }

    bool operator==(const FrequencyGrid& o) const {
        return lo == o.lo && hi == o.hi && count == o.count;
    }
};

}  // namespace lambdasim
