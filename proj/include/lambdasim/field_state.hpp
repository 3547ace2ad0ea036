// field_state.hpp — Drive-field states over a contiguous photon-number
// window. Amplitudes outside [n_min, n_max] are identically zero.
#pragma once

#include <vector>

#include "lambdasim/params.hpp"

namespace lambdasim {

class FieldState {
  public:
    // Poisson-weighted state with mean photon number alpha_mag^2 and phase
    // ramp exp(i n phi_alpha), truncated to alpha_mag^2 +- sigmas*alpha_mag
    // and renormalized. Throws TruncationError if the discarded probability
    // exceeds kCoherentDiscardTol before renormalization.
    static FieldState coherent(double alpha_mag, double phi_alpha, double sigmas = 6.0);

    // Single occupation-number state |n0>.
    static FieldState single_fock(int n0);

    // Equal-weight superposition of the 2W+1 numbers n0-W .. n0+W with phase
    // ramp exp(i k phi_alpha) on the offset k from n0. Requires n0 - W >= 0.
    static FieldState adjacent_window(int n0, int width, double phi_alpha);

    // Equal-weight superposition over n0 + kappa for each offset kappa, all
    // offsets pairwise separated by more than 1 so no ladder rung couples two
    // populated numbers. Phase ramp exp(i kappa phi_alpha).
    static FieldState separated_fock(int n0, std::vector<int> kappas, double phi_alpha);

    // Arbitrary amplitudes for tests and diagnostics; only checks n_min >= 0
    // and non-empty, does NOT enforce unit norm.
    static FieldState raw(int n_min, std::vector<cplx> amps);

    int n_min() const { return m_n_min; }
    int n_max() const { return m_n_min + static_cast<int>(m_amps.size()) - 1; }
    const std::vector<cplx>& amps() const { return m_amps; }

    // Amplitude at photon number n; zero outside the stored window.
    cplx amp(int n) const {
        const int k = n - m_n_min;
        if (k < 0 || k >= static_cast<int>(m_amps.size())) return cplx{0.0, 0.0};
        return m_amps[static_cast<std::size_t>(k)];
    }

    double norm_sq() const;

    static constexpr double kCoherentDiscardTol = 1e-8;
    static constexpr double kExactNormTol = 1e-10;   // fock/window/separated
    static constexpr double kCoherentNormTol = 1e-8;

  private:
    FieldState(int n_min, std::vector<cplx> amps);

    int m_n_min{0};
    std::vector<cplx> m_amps;
};

}  // namespace lambdasim
