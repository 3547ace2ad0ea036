#include "lambdasim/field_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lambdasim/errors.hpp"

namespace lambdasim {

FieldState::FieldState(int n_min, std::vector<cplx> amps)
    : m_n_min(n_min), m_amps(std::move(amps)) {
    if (m_n_min < 0) throw std::invalid_argument("photon numbers must be >= 0");
    if (m_amps.empty()) throw std::invalid_argument("state must hold at least one amplitude");
}

double FieldState::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : m_amps) s += std::norm(a);
    return s;
}

FieldState FieldState::coherent(double alpha_mag, double phi_alpha, double sigmas) {
    if (!(alpha_mag > 0.0)) throw std::invalid_argument("coherent state needs alpha_mag > 0");
    if (!(sigmas >= 4.0)) throw std::invalid_argument("coherent truncation needs sigmas >= 4");

    const double nbar = alpha_mag * alpha_mag;
    const int lo = std::max(0, static_cast<int>(std::floor(nbar - sigmas * alpha_mag)));
    const int hi = static_cast<int>(std::ceil(nbar + sigmas * alpha_mag));

    std::vector<cplx> amps(static_cast<std::size_t>(hi - lo + 1));
    double kept = 0.0;
    for (int n = lo; n <= hi; ++n) {
        // log-space Poisson amplitude: -|a|^2/2 + n ln|a| - ln(n!)/2
        const double ln_mag =
            -0.5 * nbar + n * std::log(alpha_mag) - 0.5 * std::lgamma(n + 1.0);
        const double mag = std::exp(ln_mag);
        kept += mag * mag;
        amps[static_cast<std::size_t>(n - lo)] = std::polar(mag, n * phi_alpha);
    }

    const double discarded = 1.0 - kept;
    if (discarded > kCoherentDiscardTol) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "coherent-state truncation would discard probability %.3g (limit %.3g); "
                      "widen sigmas",
                      discarded, kCoherentDiscardTol);
        throw TruncationError(msg);
    }

    const double inv_norm = 1.0 / std::sqrt(kept);
    for (cplx& a : amps) a *= inv_norm;
    return FieldState(lo, std::move(amps));
}

FieldState FieldState::single_fock(int n0) {
    if (n0 < 0) throw std::invalid_argument("single_fock needs n0 >= 0");
    return FieldState(n0, {cplx{1.0, 0.0}});
}

FieldState FieldState::adjacent_window(int n0, int width, double phi_alpha) {
    if (width < 0) throw std::invalid_argument("adjacent_window needs width >= 0");
    if (n0 - width < 0) throw std::invalid_argument("adjacent_window needs n0 - width >= 0");

    const int count = 2 * width + 1;
    const double w = 1.0 / std::sqrt(static_cast<double>(count));
    std::vector<cplx> amps(static_cast<std::size_t>(count));
    for (int k = -width; k <= width; ++k)
        amps[static_cast<std::size_t>(k + width)] = std::polar(w, k * phi_alpha);
    return FieldState(n0 - width, std::move(amps));
}

FieldState FieldState::separated_fock(int n0, std::vector<int> kappas, double phi_alpha) {
    if (kappas.empty()) throw std::invalid_argument("separated_fock needs at least one offset");
    std::sort(kappas.begin(), kappas.end());
    for (std::size_t i = 1; i < kappas.size(); ++i)
        if (kappas[i] - kappas[i - 1] <= 1)
            throw std::invalid_argument(
                "separated_fock offsets must be pairwise separated by more than 1");
    if (n0 + kappas.front() < 0)
        throw std::invalid_argument("separated_fock needs n0 + kappa >= 0 for every offset");

    const int lo = n0 + kappas.front();
    const int hi = n0 + kappas.back();
    const double w = 1.0 / std::sqrt(static_cast<double>(kappas.size()));
    std::vector<cplx> amps(static_cast<std::size_t>(hi - lo + 1), cplx{0.0, 0.0});
    for (int kappa : kappas)
        amps[static_cast<std::size_t>(n0 + kappa - lo)] = std::polar(w, kappa * phi_alpha);
    return FieldState(lo, std::move(amps));
}

FieldState FieldState::raw(int n_min, std::vector<cplx> amps) {
    return FieldState(n_min, std::move(amps));
}

}  // namespace lambdasim
