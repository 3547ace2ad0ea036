// spectrum.hpp — Emission spectra assembled from steady amplitudes, the
// classical-drive reference line shape, and comparison metrics.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lambdasim/blocks.hpp"
#include "lambdasim/params.hpp"
#include "lambdasim/time_domain.hpp"

namespace lambdasim {

struct SpectrumMeta {
    std::string scenario;  // human-readable descriptor of what produced this
    double norm{0.0};      // spacing * sum(values), recorded at build time
};

struct Spectrum {
    FrequencyGrid grid;
    std::vector<double> values;
    SpectrumMeta meta;
};

// S(delta) = D * sum over blocks of (|w+|^2 + |w-|^2). With the parameters
// used to build `amps`, integrating S over an unbounded grid yields exactly 1
// for a unit-norm state (the pathway cross terms integrate to zero).
Spectrum assemble_spectrum(const SteadyAmplitudes& amps, const SystemParams& p,
                           std::string scenario = "");

// Same assembly from the time-domain oracle's slot amplitudes:
// S(delta) = D * sum_n (|X[n]|^2 + |Y[n]|^2).
Spectrum spectrum_from_bare(const BareAmplitudes& bare, const SystemParams& p,
                            std::string scenario = "");

// Emission spectrum under a fixed classical drive of Rabi magnitude
// omega_rabi and phase phi_c: a single fictitious block with v = omega_rabi
// and unit source pair. This is the reference family the quantized runs are
// matched against.
Spectrum classical_reference_spectrum(const SystemParams& p, double omega_rabi, double phi_c,
                                      const FrequencyGrid& grid, int threads = 1);

// Uniform average of builder(2*pi*j/m_phases) for j = 0..m_phases-1. The
// pathway cross terms are exactly first-harmonic in the drive phases, so the
// average reproduces the cross-term-free spectrum for m_phases >= 2; we
// require >= 4 for headroom.
Spectrum phase_averaged_spectrum(const std::function<Spectrum(double)>& builder, int m_phases);

// Contribution of the single block with ladder index m. Summing over all
// blocks reproduces assemble_spectrum exactly.
Spectrum restricted_spectrum(const SteadyAmplitudes& amps, int m, const SystemParams& p);

// Pointwise scaled copy (values * factor); helper for fractional-weight
// comparisons against references.
Spectrum scaled_spectrum(const Spectrum& s, double factor);

// Minimum sample inside [window_lo, window_hi]; ties resolve to the lowest
// detuning. Throws std::invalid_argument if the window misses the grid or
// contains no sample.
struct DipResult {
    double location{0.0};
    double value{0.0};
};

DipResult dip_metric(const Spectrum& s, double window_lo, double window_hi);

// Detunings of strict 3-point local maxima (values[i-1] < values[i] > values[i+1]).
std::vector<double> find_peaks(const Spectrum& s);

// Pointwise comparison of two spectra on the same grid.
struct ComparisonReport {
    double l2_rel{0.0};             // ||a-b||_2 / ||b||_2
    double sup_rel{0.0};            // max|a-b| / max|b|
    std::vector<double> peaks_a;    // local maxima of a
    std::vector<double> peaks_b;    // local maxima of b
    DipResult dip_a;                // global minimum sample of a
};

// Throws std::invalid_argument when the grids differ.
ComparisonReport compare_spectra(const Spectrum& a, const Spectrum& b);

}  // namespace lambdasim
