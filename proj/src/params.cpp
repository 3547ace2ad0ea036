#include "lambdasim/params.hpp"

#include <cmath>
#include <stdexcept>

namespace lambdasim {

namespace {
constexpr double kOmega31 = 0.0;  // frequency origin sits on the 3->1 line
const cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

void SystemParams::validate() const {
    if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0))
        throw std::invalid_argument("partial widths gamma1, gamma2 must be >= 0");
    if (!(gamma1 + gamma2 > 0.0))
        throw std::invalid_argument("total width gamma1 + gamma2 must be > 0");
    if (!(omega21 >= 0.0))
        throw std::invalid_argument("lower-state splitting omega21 must be >= 0");
    if (!(gbar_mag >= 0.0))
        throw std::invalid_argument("drive magnitude gbar_mag must be >= 0");
    if (!(density > 0.0))
        throw std::invalid_argument("mode density must be > 0");
    if (!std::isfinite(gamma1) || !std::isfinite(gamma2) || !std::isfinite(omega21) ||
        !std::isfinite(gbar_mag) || !std::isfinite(phi) || !std::isfinite(phi_g) ||
        !std::isfinite(phi_ghat) || !std::isfinite(density))
        throw std::invalid_argument("system parameters must be finite");
}

Detunings detunings(double omega, const SystemParams& p) {
    const double delta = omega - kOmega31;
    return Detunings{delta, delta + p.omega21};
}

Couplings couplings_from_rates(const SystemParams& p) {
    p.validate();
    const double mag_g = std::sqrt(p.gamma1 / (kTwoPi * p.density));
    const double mag_ghat = std::sqrt(p.gamma2 / (kTwoPi * p.density));
    return Couplings{std::polar(mag_g, p.phi_g), std::polar(mag_ghat, p.phi_ghat)};
}

PartialRates rates_from_couplings(const cplx& g, const cplx& ghat, double density) {
    if (!(density > 0.0)) throw std::invalid_argument("mode density must be > 0");
    return PartialRates{kTwoPi * density * std::norm(g), kTwoPi * density * std::norm(ghat)};
}

DressedPair dressed_from_bare(const cplx& x_amp, const cplx& y_amp, double phi) {
    const cplx rot = kI * std::polar(1.0, -phi);  // i e^{-i phi}
    return DressedPair{(x_amp - rot * y_amp) * kInvSqrt2, (x_amp + rot * y_amp) * kInvSqrt2};
}

BarePair bare_from_dressed(const cplx& plus, const cplx& minus, double phi) {
    const cplx rot = kI * std::polar(1.0, phi);  // i e^{i phi}
    return BarePair{(plus + minus) * kInvSqrt2, rot * (plus - minus) * kInvSqrt2};
}

void FrequencyGrid::validate() const {
    if (!(lo < hi)) throw std::invalid_argument("grid requires lo < hi");
    if (count < 2) throw std::invalid_argument("grid requires count >= 2");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("grid bounds must be finite");
}

}  // namespace lambdasim
