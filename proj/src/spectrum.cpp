#include "lambdasim/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "lambdasim/parallel.hpp"

namespace lambdasim {

namespace {
double record_norm(Spectrum& s) {
    double sum = 0.0;
    for (double v : s.values) sum += v;
    s.meta.norm = s.grid.spacing() * sum;
    return s.meta.norm;
}
}  // namespace

Spectrum assemble_spectrum(const SteadyAmplitudes& amps, const SystemParams& p,
                           std::string scenario) {
    p.validate();
    Spectrum s;
    s.grid = amps.grid;
    s.meta.scenario = std::move(scenario);
    s.values.assign(static_cast<std::size_t>(amps.grid.count), 0.0);
    for (int i = 0; i < amps.grid.count; ++i) {
        double acc = 0.0;
        for (std::size_t b = 0; b < amps.blocks.size(); ++b)
            acc += amps.mags[b][static_cast<std::size_t>(i)].sum_sq();
        s.values[static_cast<std::size_t>(i)] = p.density * acc;
    }
    record_norm(s);
    return s;
}

Spectrum spectrum_from_bare(const BareAmplitudes& bare, const SystemParams& p,
                            std::string scenario) {
    p.validate();
    Spectrum s;
    s.grid = bare.grid;
    s.meta.scenario = std::move(scenario);
    s.values.assign(static_cast<std::size_t>(bare.grid.count), 0.0);
    for (int i = 0; i < bare.grid.count; ++i) {
        double acc = 0.0;
        for (const cplx& v : bare.x[static_cast<std::size_t>(i)]) acc += std::norm(v);
        for (const cplx& v : bare.y[static_cast<std::size_t>(i)]) acc += std::norm(v);
        s.values[static_cast<std::size_t>(i)] = p.density * acc;
    }
    record_norm(s);
    return s;
}

Spectrum classical_reference_spectrum(const SystemParams& p, double omega_rabi, double phi_c,
                                      const FrequencyGrid& grid, int threads) {
    p.validate();
    grid.validate();
    if (!(omega_rabi >= 0.0)) throw std::invalid_argument("omega_rabi must be >= 0");

    // A fixed drive keeps one rung: v = omega_rabi, unit weight on both slots,
    // drive phase phi_c. Ladder index 0 is arbitrary; v is overridden.
    SystemParams pc = p;
    pc.phi = phi_c;
    Block blk{0, omega_rabi, cplx{1.0, 0.0}, cplx{1.0, 0.0}};

    Spectrum s;
    s.grid = grid;
    s.meta.scenario = "classical(omega_rabi=" + std::to_string(omega_rabi) +
                      ",phi_c=" + std::to_string(phi_c) + ")";
    s.values.assign(static_cast<std::size_t>(grid.count), 0.0);
    parallel_for(grid.count, threads, [&](int i) {
        const double delta = detunings(grid.omega(i), pc).delta;
        s.values[static_cast<std::size_t>(i)] =
            pc.density * solve_block_steady(blk, delta, pc).sum_sq();
    });
    record_norm(s);
    return s;
}

Spectrum phase_averaged_spectrum(const std::function<Spectrum(double)>& builder, int m_phases) {
    if (m_phases < 4) throw std::invalid_argument("phase average needs m_phases >= 4");
    Spectrum avg = builder(0.0);
    for (int j = 1; j < m_phases; ++j) {
        const Spectrum s = builder(kTwoPi * static_cast<double>(j) / m_phases);
        if (!(s.grid == avg.grid))
            throw std::invalid_argument("phase average requires a fixed grid");
        for (std::size_t i = 0; i < avg.values.size(); ++i) avg.values[i] += s.values[i];
    }
    const double inv = 1.0 / static_cast<double>(m_phases);
    for (double& v : avg.values) v *= inv;
    avg.meta.scenario = "phase_average(m=" + std::to_string(m_phases) + "," + avg.meta.scenario + ")";
    record_norm(avg);
    return avg;
}

Spectrum restricted_spectrum(const SteadyAmplitudes& amps, int m, const SystemParams& p) {
    p.validate();
    const int b = amps.block_position(m);  // throws if absent
    Spectrum s;
    s.grid = amps.grid;
    s.meta.scenario = "block(m=" + std::to_string(m) + ")";
    s.values.assign(static_cast<std::size_t>(amps.grid.count), 0.0);
    for (int i = 0; i < amps.grid.count; ++i)
        s.values[static_cast<std::size_t>(i)] =
            p.density * amps.mags[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)].sum_sq();
    record_norm(s);
    return s;
}

Spectrum scaled_spectrum(const Spectrum& s, double factor) {
    Spectrum out = s;
    for (double& v : out.values) v *= factor;
    record_norm(out);
    return out;
}

DipResult dip_metric(const Spectrum& s, double window_lo, double window_hi) {
    if (!(window_lo < window_hi)) throw std::invalid_argument("dip window needs lo < hi");
    if (window_lo < s.grid.lo || window_hi > s.grid.hi)
        throw std::invalid_argument("dip window must lie inside the grid");
    bool found = false;
    DipResult best;
    for (int i = 0; i < s.grid.count; ++i) {
        const double w = s.grid.omega(i);
        if (w < window_lo || w > window_hi) continue;
        const double v = s.values[static_cast<std::size_t>(i)];
        // strict < keeps the lowest detuning on ties
        if (!found || v < best.value) {
            best = DipResult{w, v};
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("dip window contains no grid sample");
    return best;
}

std::vector<double> find_peaks(const Spectrum& s) {
    std::vector<double> peaks;
    for (int i = 1; i + 1 < s.grid.count; ++i) {
        const double v = s.values[static_cast<std::size_t>(i)];
        if (v > s.values[static_cast<std::size_t>(i - 1)] &&
            v > s.values[static_cast<std::size_t>(i + 1)])
            peaks.push_back(s.grid.omega(i));
    }
    return peaks;
}

ComparisonReport compare_spectra(const Spectrum& a, const Spectrum& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("compare_spectra requires identical grids");

    double diff2 = 0.0, ref2 = 0.0, sup_diff = 0.0, sup_ref = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        diff2 += d * d;
        ref2 += b.values[i] * b.values[i];
        sup_diff = std::max(sup_diff, std::abs(d));
        sup_ref = std::max(sup_ref, std::abs(b.values[i]));
    }

    ComparisonReport r;
    r.l2_rel = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : (diff2 > 0.0 ? INFINITY : 0.0);
    r.sup_rel = sup_ref > 0.0 ? sup_diff / sup_ref : (sup_diff > 0.0 ? INFINITY : 0.0);
    r.peaks_a = find_peaks(a);
    r.peaks_b = find_peaks(b);
    r.dip_a = dip_metric(a, a.grid.lo, a.grid.hi);
    return r;
}

}  // namespace lambdasim
