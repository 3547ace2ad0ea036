// checks.cpp — Acceptance criteria and runtime-invariant checks shared by the
// acceptance test binary and the `verify` CLI subcommand. Every tolerance is
// pinned here, in one place.
#include "lambdasim/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <utility>

#include "lambdasim/blocks.hpp"
#include "lambdasim/errors.hpp"
#include "lambdasim/field_state.hpp"
#include "lambdasim/params.hpp"
#include "lambdasim/scenario.hpp"
#include "lambdasim/spectrum.hpp"
#include "lambdasim/time_domain.hpp"

namespace lambdasim::checks {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Default symmetric-width parameter set used by most criteria.
SystemParams base_params(double gbar_mag) {
    SystemParams p;
    p.gamma1 = 0.5;
    p.gamma2 = 0.5;
    p.omega21 = 1.0;
    p.gbar_mag = gbar_mag;
    return p;
}

// The drive magnitude that puts the n0 = 400 rung exactly at v = 5.
double gbar_for_v400() { return 5.0 / std::sqrt(401.0); }

FrequencyGrid wide_grid() { return FrequencyGrid{-40.0, 40.0, 4001}; }

Spectrum quant_spectrum(const FieldState& state, const SystemParams& p,
                        const FrequencyGrid& grid, int threads) {
    return assemble_spectrum(steady_amplitudes(state, p, grid, threads), p);
}

double sup_abs_diff(const Spectrum& a, const Spectrum& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

struct NamedCheck {
    std::string name;
    double budget_s;  // <= 0 means no runtime budget
    std::function<std::pair<bool, std::string>(int threads)> body;
};

CheckResult run_one(const NamedCheck& chk, int threads) {
    CheckResult r;
    r.name = chk.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        auto [pass, detail] = chk.body(threads);
        r.pass = pass;
        r.detail = std::move(detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("unexpected exception: ") + e.what();
    }
    r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (chk.budget_s > 0.0 && r.elapsed_s > chk.budget_s) {
        r.pass = false;
        r.detail += " [exceeded runtime budget of " + fmt(chk.budget_s) + " s]";
    }
    return r;
}

// ---------------------------------------------------------------------------
// Acceptance criteria
// ---------------------------------------------------------------------------

// 1. Nine (state phase, drive phase) cells each match the expected classical
//    reference phase by nearest-l2 with a 2x margin.
std::pair<bool, std::string> crit_phase_table(int threads) {
    const PhaseTable t = compute_phase_table(threads);
    const bool pass = t.matches_expected && t.worst_best_l2 <= 0.05 && t.min_margin >= 2.0;
    std::ostringstream os;
    static const char* kLetters = "abcd";
    os << "letters=";
    for (const auto& row : t.letters) {
        os << '[';
        for (int k : row) os << kLetters[k];
        os << ']';
    }
    os << " worst_l2=" << fmt(t.worst_best_l2) << " min_margin=" << fmt(t.min_margin)
       << " (need letters [abc][bcd][cda], l2 <= 0.05, margin >= 2)";
    return {pass, os.str()};
}

// 2. Closed-form block solver vs. direct RK4 integration of the bare
//    amplitude equations agree to 1e-6 in every eigenmode magnitude.
std::pair<bool, std::string> crit_oracle_equivalence(int threads) {
    SystemParams p = base_params(1.0);
    p.phi = 0.9;  // exercise the drive-phase path as well
    const FieldState state = FieldState::single_fock(3);
    const FrequencyGrid grid{-8.0, 8.0, 101};

    const SteadyAmplitudes fast = steady_amplitudes(state, p, grid, threads);
    const IntegratorConfig cfg;  // defaults: t_end 100, dt_factor 0.005
    const SteadyAmplitudes slow =
        steady_magnitudes_from_bare(integrate_bare(state, p, grid, cfg, threads));

    double worst = 0.0;
    for (std::size_t b = 0; b < fast.blocks.size(); ++b)
        for (int i = 0; i < grid.count; ++i) {
            const auto& f = fast.mags[b][static_cast<std::size_t>(i)];
            const auto& s = slow.mags[b][static_cast<std::size_t>(i)];
            if (s.plus > 0.0) worst = std::max(worst, std::abs(f.plus - s.plus) / s.plus);
            if (s.minus > 0.0) worst = std::max(worst, std::abs(f.minus - s.minus) / s.minus);
        }
    return {worst <= 1e-6, "max relative magnitude deviation=" + fmt(worst) + " (need <= 1e-6)"};
}

// 3. Grid integral of the spectrum is 1 +- 0.03 for one scenario per state
//    family (the finite [-40, 40] window loses ~0.8% of each line's tails).
std::pair<bool, std::string> crit_normalization(int threads) {
    const FrequencyGrid grid = wide_grid();
    struct Case {
        const char* label;
        FieldState state;
        double gbar;
    };
    const Case cases[] = {
        {"coherent", FieldState::coherent(20.0, 0.0), 0.25},
        {"fock", FieldState::single_fock(400), gbar_for_v400()},
        {"window", FieldState::adjacent_window(400, 4, 0.0), 0.25},
        {"separated", FieldState::separated_fock(400, {0, 2, 4}, 0.0), 0.25},
    };
    bool pass = true;
    std::ostringstream os;
    for (const Case& c : cases) {
        const Spectrum s = quant_spectrum(c.state, base_params(c.gbar), grid, threads);
        const bool ok = s.meta.norm >= 0.97 && s.meta.norm <= 1.03;
        pass = pass && ok;
        os << c.label << "=" << fmt(s.meta.norm) << (ok ? " " : "(FAIL) ");
    }
    os << "(need within [0.97, 1.03])";
    return {pass, os.str()};
}

// 4. Single-occupation-number spectra carry no phase information: drive
//    phases {0, pi/2, 1.7} give identical spectra to 1e-12.
std::pair<bool, std::string> crit_fock_phase_independence(int threads) {
    const FieldState state = FieldState::single_fock(400);
    const FrequencyGrid grid = wide_grid();
    SystemParams p = base_params(gbar_for_v400());
    const Spectrum ref = quant_spectrum(state, p, grid, threads);
    double worst = 0.0;
    for (double phi : {kPi / 2.0, 1.7}) {
        p.phi = phi;
        worst = std::max(worst, sup_abs_diff(quant_spectrum(state, p, grid, threads), ref));
    }
    return {worst <= 1e-12, "sup deviation across drive phases=" + fmt(worst) + " (need <= 1e-12)"};
}

// 5. Averaging the coherent-state spectrum over 8 state phases equals the
//    cross-term-free spectrum to 1e-10, and both sit within l2 0.05 of the
//    single-Fock(400) spectrum.
std::pair<bool, std::string> crit_phase_average(int threads) {
    const FrequencyGrid grid = wide_grid();
    const SystemParams p = base_params(0.25);

    const Spectrum averaged = phase_averaged_spectrum(
        [&](double ph) { return quant_spectrum(FieldState::coherent(20.0, ph), p, grid, threads); },
        8);

    SystemParams p_off = p;
    p_off.interference = false;
    const Spectrum no_cross = quant_spectrum(FieldState::coherent(20.0, 0.0), p_off, grid, threads);

    const Spectrum fock = quant_spectrum(FieldState::single_fock(400), p, grid, threads);

    const double d_exact = sup_abs_diff(averaged, no_cross);
    const double l2_avg = compare_spectra(averaged, fock).l2_rel;
    const double l2_off = compare_spectra(no_cross, fock).l2_rel;
    const bool pass = d_exact <= 1e-10 && l2_avg <= 0.05 && l2_off <= 0.05;
    return {pass, "sup|averaged - cross-free|=" + fmt(d_exact) + " (need <= 1e-10), l2 vs fock: " +
                      fmt(l2_avg) + ", " + fmt(l2_off) + " (need <= 0.05)"};
}

// 6. Well-separated occupation numbers emit independently: the spectrum is
//    the equal-weight sum of the single-number spectra and is state-phase
//    independent, both to 1e-12.
std::pair<bool, std::string> crit_separated_additivity(int threads) {
    const FrequencyGrid grid = wide_grid();
    const SystemParams p = base_params(gbar_for_v400());

    const Spectrum sep = quant_spectrum(FieldState::separated_fock(400, {0, 2, 4}, 0.9), p, grid, threads);
    const Spectrum sep2 =
        quant_spectrum(FieldState::separated_fock(400, {0, 2, 4}, 2.3), p, grid, threads);

    Spectrum sum = sep;
    std::fill(sum.values.begin(), sum.values.end(), 0.0);
    for (int n0 : {400, 402, 404}) {
        const Spectrum s = quant_spectrum(FieldState::single_fock(n0), p, grid, threads);
        for (std::size_t i = 0; i < sum.values.size(); ++i)
            sum.values[i] += s.values[i] / 3.0;
    }

    const double d_add = sup_abs_diff(sep, sum);
    const double d_phase = sup_abs_diff(sep, sep2);
    const bool pass = d_add <= 1e-12 && d_phase <= 1e-12;
    return {pass, "sup|spectrum - weighted sum|=" + fmt(d_add) + ", sup phase dependence=" +
                      fmt(d_phase) + " (need both <= 1e-12)"};
}

// 7. Fock(400) with v_400 = 5 exactly: four local maxima within 0.05 of
//    {-6, -5, 4, 5}. Sampled at 0.04 spacing: fine against the 0.5-halfwidth
//    lines, while the maxima of overlapping-line sums sit up to ~0.052 from
//    the ideal pole positions in the continuum (neighboring-line pull).
std::pair<bool, std::string> crit_peak_positions(int threads) {
    const FrequencyGrid grid{-8.0, 8.0, 401};
    const Spectrum s =
        quant_spectrum(FieldState::single_fock(400), base_params(gbar_for_v400()), grid, threads);
    const std::vector<double> peaks = find_peaks(s);
    const double targets[] = {-6.0, -5.0, 4.0, 5.0};

    std::ostringstream os;
    os << "peaks=[";
    for (std::size_t i = 0; i < peaks.size(); ++i) os << (i ? "," : "") << fmt(peaks[i]);
    os << "]";
    if (peaks.size() != 4) {
        os << " (need exactly 4)";
        return {false, os.str()};
    }
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(peaks[static_cast<std::size_t>(i)] - targets[i]));
    os << " max deviation from {-6,-5,4,5}=" << fmt(worst) << " (need <= 0.05)";
    return {worst <= 0.05, os.str()};
}

// 8. The classical-drive dip in [4, 5.5] is strictly deepest when the
//    lower-state splitting equals the total width.
std::pair<bool, std::string> crit_dip_ordering(int threads) {
    const FrequencyGrid grid = wide_grid();
    const double splittings[] = {0.1, 0.5, 1.0, 2.0};
    double dips[4] = {};
    std::ostringstream os;
    for (int i = 0; i < 4; ++i) {
        SystemParams p = base_params(0.25);
        p.omega21 = splittings[i];
        const Spectrum s = classical_reference_spectrum(p, 5.0, 0.0, grid, threads);
        dips[i] = dip_metric(s, 4.0, 5.5).value;
        os << "dip(" << fmt(splittings[i]) << ")=" << fmt(dips[i]) << " ";
    }
    const bool pass = dips[2] < dips[0] && dips[2] < dips[1] && dips[2] < dips[3];
    os << "(need strictly smallest at splitting 1)";
    return {pass, os.str()};
}

// 9. The m = 400 block of the width-1 window state reproduces the classical
//    reference at one third weight, within l2 0.02.
std::pair<bool, std::string> crit_restricted_classical(int threads) {
    const FrequencyGrid grid = wide_grid();
    const SystemParams p = base_params(gbar_for_v400());
    const SteadyAmplitudes amps =
        steady_amplitudes(FieldState::adjacent_window(400, 1, 0.0), p, grid, threads);
    const Spectrum restricted = restricted_spectrum(amps, 400, p);
    const double omega_rabi = p.gbar_mag * std::sqrt(401.0);
    const Spectrum ref =
        scaled_spectrum(classical_reference_spectrum(p, omega_rabi, 0.0, grid, threads), 1.0 / 3.0);
    const double l2 = compare_spectra(restricted, ref).l2_rel;
    return {l2 <= 0.02, "l2 vs classical/3=" + fmt(l2) + " (need <= 0.02)"};
}

// 10. Wider equal-weight windows converge to the classical reference:
//     l2 distance non-increasing over widths {1, 2, 4, 8}.
std::pair<bool, std::string> crit_width_convergence(int threads) {
    const FrequencyGrid grid = wide_grid();
    const SystemParams p = base_params(0.25);
    const Spectrum ref =
        classical_reference_spectrum(p, p.gbar_mag * std::sqrt(401.0), 0.0, grid, threads);
    const int widths[] = {1, 2, 4, 8};
    double l2s[4] = {};
    std::ostringstream os;
    for (int i = 0; i < 4; ++i) {
        const Spectrum s =
            quant_spectrum(FieldState::adjacent_window(400, widths[i], 0.0), p, grid, threads);
        l2s[i] = compare_spectra(s, ref).l2_rel;
        os << "l2(W=" << widths[i] << ")=" << fmt(l2s[i]) << " ";
    }
    bool pass = l2s[3] < l2s[0];
    for (int i = 0; i + 1 < 4; ++i) pass = pass && l2s[i + 1] <= l2s[i] + 1e-12;
    os << "(need non-increasing)";
    return {pass, os.str()};
}

// 11. Discretizing the vacuum into 800 modes over an 80-wide band reproduces
//     exponential upper-state decay within 2% absolute over t in [0, 8], with
//     parallel and orthogonal dipole variants agreeing to numerical noise.
std::pair<bool, std::string> crit_flat_bath_decay(int) {
    SystemParams p = base_params(0.5);
    const FieldState state = FieldState::single_fock(1);
    const FullBathConfig cfg;  // 800 modes, span 80, t_end 8

    const FullBathResult par = full_bath_simulate(state, p, cfg);
    p.interference = false;
    const FullBathResult orth = full_bath_simulate(state, p, cfg);

    double worst_exp = 0.0;
    for (std::size_t i = 0; i < par.times.size(); ++i) {
        const double expect = std::exp(-p.gamma() * par.times[i]);
        worst_exp = std::max(worst_exp, std::abs(par.upper_population[i] - expect));
        worst_exp = std::max(worst_exp, std::abs(orth.upper_population[i] - expect));
    }
    double worst_pair = 0.0;
    for (std::size_t i = 0; i < par.times.size(); ++i)
        worst_pair =
            std::max(worst_pair, std::abs(par.upper_population[i] - orth.upper_population[i]));
    const double drift = std::max(par.total_norm_drift, orth.total_norm_drift);

    const bool pass = worst_exp <= 0.02 && worst_pair <= 1e-9 && drift <= 1e-6;
    return {pass, "max |population - exp(-gamma t)|=" + fmt(worst_exp) +
                      " (need <= 0.02), parallel vs orthogonal=" + fmt(worst_pair) +
                      " (need <= 1e-9), norm drift=" + fmt(drift) + " (need <= 1e-6)"};
}

// ---------------------------------------------------------------------------
// Invariant checks backing `verify`
// ---------------------------------------------------------------------------

// Dressed/bare change of basis is unitary and self-inverse.
std::pair<bool, std::string> inv_dressed_unitarity(int) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_norm = 0.0, worst_round = 0.0;
    for (int k = 0; k < 200; ++k) {
        const cplx x{u(rng), u(rng)}, y{u(rng), u(rng)};
        const double phi = kPi * u(rng);
        const DressedPair d = dressed_from_bare(x, y, phi);
        const double n_bare = std::norm(x) + std::norm(y);
        const double n_dressed = std::norm(d.plus) + std::norm(d.minus);
        worst_norm = std::max(worst_norm, std::abs(n_dressed - n_bare));
        const BarePair b = bare_from_dressed(d.plus, d.minus, phi);
        worst_round = std::max(worst_round, std::abs(b.x_amp - x) + std::abs(b.y_amp - y));
    }
    const bool pass = worst_norm <= 1e-12 && worst_round <= 1e-12;
    return {pass, "worst norm change=" + fmt(worst_norm) + ", worst round trip=" + fmt(worst_round) +
                      " (need both <= 1e-12)"};
}

// With one decay channel and no drive the spectrum is a Lorentzian of full
// width gamma, peak 2/(pi gamma), unit area.
std::pair<bool, std::string> inv_two_level_lineshape(int threads) {
    SystemParams p;
    p.gamma1 = 1.0;
    p.gamma2 = 0.0;
    p.omega21 = 1.0;
    p.gbar_mag = 0.0;
    const FieldState state = FieldState::single_fock(0);

    const Spectrum fine = quant_spectrum(state, p, FrequencyGrid{-3.0, 3.0, 6001}, threads);
    const double peak = fine.values[3000];
    const double d_peak = std::abs(peak - 2.0 / kPi);

    const double half = peak / 2.0;
    double left = 0.0, right = 0.0;
    bool have_left = false, have_right = false;
    for (int i = 1; i < fine.grid.count; ++i) {
        const double prev = fine.values[static_cast<std::size_t>(i - 1)];
        const double cur = fine.values[static_cast<std::size_t>(i)];
        if (!have_left && prev < half && cur >= half) {
            left = fine.grid.omega(i);
            have_left = true;
        }
        if (!have_right && prev >= half && cur < half) {
            right = fine.grid.omega(i - 1);
            have_right = true;
        }
    }
    const double fwhm = have_left && have_right ? right - left : 0.0;
    const double d_width = std::abs(fwhm - p.gamma());

    const Spectrum wide = quant_spectrum(state, p, wide_grid(), threads);
    const bool norm_ok = wide.meta.norm >= 0.97 && wide.meta.norm <= 1.01;

    const bool pass = d_peak <= 1e-12 && d_width <= 2.5 * fine.grid.spacing() && norm_ok;
    return {pass, "peak deviation=" + fmt(d_peak) + ", FWHM=" + fmt(fwhm) + " (need gamma=1 +- " +
                      fmt(2.5 * fine.grid.spacing()) + "), norm=" + fmt(wide.meta.norm) +
                      " (need [0.97, 1.01])"};
}

// Coherent-state spectra depend on the drive and state phases only through
// their sum.
std::pair<bool, std::string> inv_phase_group_structure(int threads) {
    const FrequencyGrid grid{-40.0, 40.0, 1001};
    auto build = [&](double phi, double phi_alpha) {
        SystemParams p = base_params(0.25);
        p.phi = phi;
        return quant_spectrum(FieldState::coherent(20.0, phi_alpha), p, grid, threads);
    };
    const Spectrum a = build(0.8, 0.5);
    const Spectrum b = build(0.3, 1.0);
    const Spectrum c = build(1.3, 0.0);
    const double worst = std::max(sup_abs_diff(a, b), sup_abs_diff(a, c));
    return {worst <= 1e-10,
            "sup deviation across equal-phase-sum pairs=" + fmt(worst) + " (need <= 1e-10)"};
}

// Averaging over the drive phase gives the same spectrum as averaging over
// the state phase, and averaging a number-state spectrum is a no-op.
std::pair<bool, std::string> inv_phase_average_operators(int threads) {
    const FrequencyGrid grid{-40.0, 40.0, 1001};
    const SystemParams p = base_params(0.25);

    const Spectrum over_state = phase_averaged_spectrum(
        [&](double ph) { return quant_spectrum(FieldState::coherent(20.0, ph), p, grid, threads); },
        4);
    const Spectrum over_drive = phase_averaged_spectrum(
        [&](double ph) {
            SystemParams q = p;
            q.phi = ph;
            return quant_spectrum(FieldState::coherent(20.0, 0.0), q, grid, threads);
        },
        4);
    const double d_swap = sup_abs_diff(over_state, over_drive);

    SystemParams pf = base_params(gbar_for_v400());
    const Spectrum fock = quant_spectrum(FieldState::single_fock(400), pf, grid, threads);
    const Spectrum fock_avg = phase_averaged_spectrum(
        [&](double ph) {
            SystemParams q = pf;
            q.phi = ph;
            return quant_spectrum(FieldState::single_fock(400), q, grid, threads);
        },
        4);
    const double d_fock = sup_abs_diff(fock, fock_avg);

    const bool pass = d_swap <= 1e-10 && d_fock <= 1e-12;
    return {pass, "drive-vs-state average deviation=" + fmt(d_swap) +
                      " (need <= 1e-10), number-state average deviation=" + fmt(d_fock) +
                      " (need <= 1e-12)"};
}

// Ladder blocks evolve independently: restricting the input state to one
// block's sources reproduces that block, and the per-block spectra sum to
// the assembled spectrum.
std::pair<bool, std::string> inv_block_closure(int threads) {
    std::vector<cplx> amps{{0.5, 0.0}, {-0.3, 0.2}, {0.1, -0.7}, {0.35, 0.0}};
    double nrm = 0.0;
    for (const cplx& a : amps) nrm += std::norm(a);
    for (cplx& a : amps) a /= std::sqrt(nrm);
    const FieldState full = FieldState::raw(3, amps);

    const SystemParams p = base_params(0.6);
    const FrequencyGrid grid{-1.7, 2.3, 5};
    const SteadyAmplitudes whole = steady_amplitudes(full, p, grid, threads);

    double worst = 0.0;
    for (std::size_t b = 0; b < whole.blocks.size(); ++b) {
        const Block& blk = whole.blocks[b];
        std::vector<cplx> pair_amps(static_cast<std::size_t>(2), cplx{0.0, 0.0});
        pair_amps[0] = full.amp(blk.m);
        pair_amps[1] = full.amp(blk.m + 1);
        const FieldState only = FieldState::raw(std::max(0, blk.m), pair_amps);
        const SteadyAmplitudes part = steady_amplitudes(only, p, grid, threads);
        const int pos = part.block_position(blk.m);
        for (int i = 0; i < grid.count; ++i) {
            const auto& w = whole.mags[b][static_cast<std::size_t>(i)];
            const auto& q = part.mags[static_cast<std::size_t>(pos)][static_cast<std::size_t>(i)];
            worst = std::max({worst, std::abs(w.plus - q.plus), std::abs(w.minus - q.minus)});
        }
    }

    const Spectrum assembled = assemble_spectrum(whole, p);
    Spectrum summed = assembled;
    std::fill(summed.values.begin(), summed.values.end(), 0.0);
    for (const Block& blk : whole.blocks) {
        const Spectrum part = restricted_spectrum(whole, blk.m, p);
        for (std::size_t i = 0; i < summed.values.size(); ++i) summed.values[i] += part.values[i];
    }
    const double d_sum = sup_abs_diff(assembled, summed);

    const bool pass = worst <= 1e-12 && d_sum <= 1e-12;
    return {pass, "worst isolated-block deviation=" + fmt(worst) + ", blockwise-sum deviation=" +
                      fmt(d_sum) + " (need both <= 1e-12)"};
}

// Halving the RK4 step changes the integrated magnitudes by < 1e-8.
std::pair<bool, std::string> inv_oracle_dt_halving(int threads) {
    const SystemParams p = base_params(0.5);
    const FieldState state = FieldState::single_fock(1);
    const FrequencyGrid grid{-2.0, 2.0, 21};
    IntegratorConfig cfg;
    // The stationarity certificate needs the slowest transient fully decayed;
    // 60 time units leaves ~1e-6 residual drift, above the 1e-8 tolerance.
    cfg.t_end = 100.0;
    cfg.dt = 2e-3;
    const SteadyAmplitudes coarse =
        steady_magnitudes_from_bare(integrate_bare(state, p, grid, cfg, threads));
    cfg.dt = 1e-3;
    const SteadyAmplitudes fine =
        steady_magnitudes_from_bare(integrate_bare(state, p, grid, cfg, threads));
    double worst = 0.0;
    for (std::size_t b = 0; b < coarse.blocks.size(); ++b)
        for (int i = 0; i < grid.count; ++i) {
            const auto& c = coarse.mags[b][static_cast<std::size_t>(i)];
            const auto& f = fine.mags[b][static_cast<std::size_t>(i)];
            worst = std::max({worst, std::abs(c.plus - f.plus), std::abs(c.minus - f.minus)});
        }
    return {worst <= 1e-8, "max magnitude change under dt halving=" + fmt(worst) + " (need <= 1e-8)"};
}

// Exchanging the two decay channels while flipping the drive phase by pi
// mirrors the spectrum about delta = -omega21/2: block level and classical.
std::pair<bool, std::string> inv_mirror_symmetry(int threads) {
    SystemParams pa = base_params(0.0);
    pa.gamma1 = 0.3;
    pa.gamma2 = 0.7;
    pa.omega21 = 1.3;
    SystemParams pb = pa;
    std::swap(pb.gamma1, pb.gamma2);
    pb.phi = kPi;

    const cplx cx{0.5, 0.2}, cy{-0.3, 0.6};
    const Block ba{0, 0.8, cx, cy};
    const Block bb{0, 0.8, std::conj(cy), std::conj(cx)};
    double worst_block = 0.0;
    for (double delta : {-2.1, -0.4, 0.0, 0.65, 1.7}) {
        const EigenmodeMagnitudes ma = solve_block_steady(ba, delta, pa);
        const EigenmodeMagnitudes mb = solve_block_steady(bb, -delta - pa.omega21, pb);
        worst_block = std::max(
            {worst_block, std::abs(ma.plus - mb.minus), std::abs(ma.minus - mb.plus)});
    }

    SystemParams ca = base_params(0.25);
    ca.gamma1 = 0.3;
    ca.gamma2 = 0.7;
    SystemParams cb = ca;
    std::swap(cb.gamma1, cb.gamma2);
    // Grid symmetric about -omega21/2 so the mirror maps samples to samples.
    const FrequencyGrid grid{-10.5, 9.5, 401};
    const Spectrum sa = classical_reference_spectrum(ca, 5.0, 0.7, grid, threads);
    const Spectrum sb = classical_reference_spectrum(cb, 5.0, 0.7 + kPi, grid, threads);
    double worst_cl = 0.0;
    for (int i = 0; i < grid.count; ++i)
        worst_cl = std::max(worst_cl,
                            std::abs(sa.values[static_cast<std::size_t>(i)] -
                                     sb.values[static_cast<std::size_t>(grid.count - 1 - i)]));

    const bool pass = worst_block <= 1e-13 && worst_cl <= 1e-13;
    return {pass, "block-level mirror deviation=" + fmt(worst_block) + ", classical mirror deviation=" +
                      fmt(worst_cl) + " (need both <= 1e-13)"};
}

// With parallel dipoles the interference never nulls the whole spectrum.
std::pair<bool, std::string> inv_no_full_cancellation(int threads) {
    const FrequencyGrid grid = wide_grid();
    double worst_min = 1e300;
    const SystemParams p = base_params(0.25);
    const Spectrum cl = classical_reference_spectrum(p, 5.0, 0.0, grid, threads);
    const Spectrum coh = quant_spectrum(FieldState::coherent(20.0, 0.0), p, grid, threads);
    const Spectrum fock =
        quant_spectrum(FieldState::single_fock(400), base_params(gbar_for_v400()), grid, threads);
    for (const Spectrum* s : {&cl, &coh, &fock})
        for (double v : s->values) worst_min = std::min(worst_min, v);
    return {worst_min > 0.0, "smallest sample across scenarios=" + fmt(worst_min) + " (need > 0)"};
}

// Grid integrals stay in the [0.97, 1.01] band expected from tail loss alone.
std::pair<bool, std::string> inv_grid_normalization(int threads) {
    const FrequencyGrid grid = wide_grid();
    const Spectrum coh = quant_spectrum(FieldState::coherent(20.0, 1.1), base_params(0.25), grid, threads);
    const Spectrum win =
        quant_spectrum(FieldState::adjacent_window(400, 2, 0.4), base_params(0.25), grid, threads);
    SystemParams p_off = base_params(0.25);
    p_off.interference = false;
    const Spectrum off = quant_spectrum(FieldState::coherent(20.0, 0.0), p_off, grid, threads);
    bool pass = true;
    std::ostringstream os;
    for (const Spectrum* s : {&coh, &win, &off}) {
        pass = pass && s->meta.norm >= 0.97 && s->meta.norm <= 1.01;
        os << fmt(s->meta.norm) << " ";
    }
    os << "(need within [0.97, 1.01])";
    return {pass, os.str()};
}

// Constructors and config parsing reject unusable input loudly.
std::pair<bool, std::string> inv_input_validation(int) {
    int caught = 0, expected = 0;

    ++expected;
    try {
        (void)FieldState::coherent(2.0, 0.0, 6.0);  // discards ~1e-6 > gate
    } catch (const TruncationError&) {
        ++caught;
    }
    ++expected;
    try {
        (void)FieldState::adjacent_window(2, 3, 0.0);  // would reach below 0
    } catch (const std::invalid_argument&) {
        ++caught;
    }
    ++expected;
    try {
        (void)FieldState::separated_fock(400, {0, 1}, 0.0);  // adjacent numbers
    } catch (const std::invalid_argument&) {
        ++caught;
    }
    ++expected;
    try {
        (void)ScenarioConfig::from_kv({{"no_such_key", "1"}});
    } catch (const ConfigError&) {
        ++caught;
    }
    ++expected;
    try {
        SystemParams p;
        p.gamma1 = -1.0;
        p.validate();
    } catch (const std::invalid_argument&) {
        ++caught;
    }
    ++expected;
    try {
        FullBathConfig cfg;
        cfg.n_modes = 4;  // recurrence horizon shorter than t_end
        (void)full_bath_simulate(FieldState::single_fock(0), base_params(0.1), cfg);
    } catch (const ConfigError&) {
        ++caught;
    }

    return {caught == expected,
            fmt(caught) + "/" + fmt(expected) + " invalid inputs rejected with the documented error"};
}

// The integrator refuses to certify a run whose tail still drifts.
std::pair<bool, std::string> inv_stationarity_guard(int threads) {
    const SystemParams p = base_params(0.5);
    const FieldState state = FieldState::single_fock(1);
    const FrequencyGrid grid{-1.0, 1.0, 5};
    IntegratorConfig cfg;
    cfg.t_end = 20.0;            // legal horizon, but...
    cfg.stationarity_tol = 1e-12;  // ...an unreachable certificate at this horizon
    try {
        (void)integrate_bare(state, p, grid, cfg, threads);
    } catch (const NonConvergenceError& e) {
        return {true, std::string("rejected as expected: worst drift=") + fmt(e.worst_drift) +
                          " at block m=" + std::to_string(e.block_m)};
    }
    return {false, "expected a non-convergence rejection, run was certified instead"};
}

// Bath discretization of the no-drive two-level limit reproduces the
// Lorentzian line in the emitted mode populations.
std::pair<bool, std::string> inv_flat_bath_lineshape(int) {
    SystemParams p;
    p.gamma1 = 1.0;
    p.gamma2 = 0.0;
    p.omega21 = 1.0;
    p.gbar_mag = 0.0;
    FullBathConfig cfg;
    cfg.center = 0.0;
    cfg.center_set = true;  // line sits at delta = 0; center the band on it
    const FullBathResult r = full_bath_simulate(FieldState::single_fock(0), p, cfg);

    double worst = 0.0;
    int used = 0;
    for (std::size_t k = 0; k < r.mode_detunings.size(); ++k) {
        const double d = r.mode_detunings[k];
        if (std::abs(d) > 2.0) continue;
        const double expect = (p.gamma() / kTwoPi) / (0.25 * p.gamma() * p.gamma() + d * d);
        worst = std::max(worst, std::abs(r.spectrum[k] - expect) / expect);
        ++used;
    }
    const bool pass = worst <= 0.1 && used > 0 && r.total_norm_drift <= 1e-6;
    return {pass, "worst relative line deviation over |delta| <= 2 =" + fmt(worst) +
                      " (need <= 0.1 at this horizon), norm drift=" + fmt(r.total_norm_drift)};
}

const std::vector<NamedCheck>& acceptance_checks() {
    static const std::vector<NamedCheck> checks = {
        {"phase-table-equivalence", 60.0, crit_phase_table},
        {"oracle-equivalence", 10.0, crit_oracle_equivalence},
        {"normalization", 30.0, crit_normalization},
        {"fock-phase-independence", 0.0, crit_fock_phase_independence},
        {"phase-average-interference", 0.0, crit_phase_average},
        {"separated-additivity", 0.0, crit_separated_additivity},
        {"peak-positions", 0.0, crit_peak_positions},
        {"splitting-dip-ordering", 0.0, crit_dip_ordering},
        {"restricted-classical-equivalence", 0.0, crit_restricted_classical},
        {"width-convergence", 0.0, crit_width_convergence},
        {"flat-bath-decay", 300.0, crit_flat_bath_decay},
    };
    return checks;
}

const std::vector<NamedCheck>& verify_quick_checks() {
    static const std::vector<NamedCheck> checks = {
        {"dressed-unitarity", 0.0, inv_dressed_unitarity},
        {"input-validation", 0.0, inv_input_validation},
        {"two-level-lineshape", 0.0, inv_two_level_lineshape},
        {"block-closure", 0.0, inv_block_closure},
        {"mirror-symmetry", 0.0, inv_mirror_symmetry},
        {"phase-group-structure", 0.0, inv_phase_group_structure},
        {"phase-average-operators", 0.0, inv_phase_average_operators},
        {"no-full-cancellation", 0.0, inv_no_full_cancellation},
        {"grid-normalization", 0.0, inv_grid_normalization},
        {"oracle-dt-halving", 0.0, inv_oracle_dt_halving},
        {"stationarity-guard", 0.0, inv_stationarity_guard},
        {"oracle-equivalence", 10.0, crit_oracle_equivalence},
    };
    return checks;
}

const std::vector<NamedCheck>& verify_full_extra_checks() {
    static const std::vector<NamedCheck> checks = {
        {"flat-bath-decay", 300.0, crit_flat_bath_decay},
        {"flat-bath-lineshape", 300.0, inv_flat_bath_lineshape},
    };
    return checks;
}

}  // namespace

PhaseTable compute_phase_table(int threads) {
    const FrequencyGrid grid = wide_grid();
    const double phases[3] = {0.0, kPi / 2.0, kPi};

    std::array<Spectrum, 4> refs;
    for (int k = 0; k < 4; ++k)
        refs[static_cast<std::size_t>(k)] = classical_reference_spectrum(
            base_params(0.25), 5.0, static_cast<double>(k) * kPi / 2.0, grid, threads);

    PhaseTable table;
    table.min_margin = 1e300;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            PhaseTableCell cell;
            cell.row = r;
            cell.col = c;
            cell.phi_alpha = phases[r];
            cell.phi = phases[c];
            SystemParams p = base_params(0.25);
            p.phi = cell.phi;
            const Spectrum s =
                quant_spectrum(FieldState::coherent(20.0, cell.phi_alpha), p, grid, threads);
            for (int k = 0; k < 4; ++k)
                cell.l2[static_cast<std::size_t>(k)] =
                    compare_spectra(s, refs[static_cast<std::size_t>(k)]).l2_rel;
            cell.best = 0;
            for (int k = 1; k < 4; ++k)
                if (cell.l2[static_cast<std::size_t>(k)] < cell.l2[static_cast<std::size_t>(cell.best)])
                    cell.best = k;
            double runner_up = 1e300;
            for (int k = 0; k < 4; ++k)
                if (k != cell.best)
                    runner_up = std::min(runner_up, cell.l2[static_cast<std::size_t>(k)]);
            cell.margin = runner_up / cell.l2[static_cast<std::size_t>(cell.best)];
            table.letters[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = cell.best;
            table.worst_best_l2 =
                std::max(table.worst_best_l2, cell.l2[static_cast<std::size_t>(cell.best)]);
            table.min_margin = std::min(table.min_margin, cell.margin);
            table.cells.push_back(cell);
        }
    table.matches_expected = table.letters == PhaseTable::kExpected;
    return table;
}

std::vector<CheckResult> run_acceptance(const std::vector<int>& only, int threads,
                                        const Reporter& report) {
    const auto& checks = acceptance_checks();
    std::vector<CheckResult> results;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
        CheckResult r = run_one(checks[i], threads);
        r.name = "criterion-" + std::to_string(number) + "-" + r.name;
        if (report) report(r);
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<CheckResult> run_verify(bool full, int threads, const Reporter& report,
                                    bool stop_on_failure) {
    std::vector<NamedCheck> checks = verify_quick_checks();
    if (full)
        for (const NamedCheck& c : verify_full_extra_checks()) checks.push_back(c);

    std::vector<CheckResult> results;
    for (const NamedCheck& c : checks) {
        CheckResult r = run_one(c, threads);
        if (report) report(r);
        const bool failed = !r.pass;
        results.push_back(std::move(r));
        if (failed && stop_on_failure) break;
    }
    return results;
}

}  // namespace lambdasim::checks
