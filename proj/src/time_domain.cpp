#include "lambdasim/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lambdasim/errors.hpp"
#include "lambdasim/parallel.hpp"

namespace lambdasim {

namespace {

const cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Fastest rotation rate seen by the bare integrator on this grid.
double fastest_rate(const FieldState& state, const SystemParams& p, const FrequencyGrid& grid) {
    const double vmax = p.gbar_mag * std::sqrt(static_cast<double>(state.n_max() + 1));
    const double dmax = std::max(std::abs(grid.lo), std::abs(grid.hi));
    const double dhmax = std::max(std::abs(grid.lo + p.omega21), std::abs(grid.hi + p.omega21));
    return std::max({p.gamma(), vmax, dmax, dhmax});
}

double resolve_dt(const IntegratorConfig& cfg, double rate, double gamma) {
    if (!(cfg.t_end * gamma >= IntegratorConfig::kMinHorizon))
        throw std::invalid_argument("integrator horizon must satisfy t_end >= 20/gamma");
    double dt = cfg.dt;
    if (dt == 0.0) dt = cfg.dt_factor / rate;
    if (!(dt > 0.0)) throw std::invalid_argument("integrator step must be > 0");
    if (dt > IntegratorConfig::kMaxDtFactor / rate)
        throw std::invalid_argument("integrator step too coarse: dt must be <= 0.05 / "
                                    "max(gamma, v_max, |delta|, |delta_hat|)");
    return dt;
}

// Generic fixed-step RK4 over a complex state vector with dense output at
// checkpoint step indices.
template <typename Deriv, typename OnStep>
void rk4_run(std::vector<cplx>& z, double dt, long n_steps, Deriv&& deriv, OnStep&& on_step) {
    const std::size_t dim = z.size();
    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), zt(dim);
    for (long s = 0; s < n_steps; ++s) {
        const double t = static_cast<double>(s) * dt;
        deriv(t, z, k1);
        for (std::size_t j = 0; j < dim; ++j) zt[j] = z[j] + 0.5 * dt * k1[j];
        deriv(t + 0.5 * dt, zt, k2);
        for (std::size_t j = 0; j < dim; ++j) zt[j] = z[j] + 0.5 * dt * k2[j];
        deriv(t + 0.5 * dt, zt, k3);
        for (std::size_t j = 0; j < dim; ++j) zt[j] = z[j] + dt * k3[j];
        deriv(t + dt, zt, k4);
        for (std::size_t j = 0; j < dim; ++j)
            z[j] += (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        on_step(s + 1);
    }
}

}  // namespace

cplx upper_state_amplitude(const cplx& c0, double t, const SystemParams& p) {
    p.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
    return c0 * std::exp(-0.5 * p.gamma() * t);
}

BareAmplitudes integrate_bare(const FieldState& state, const SystemParams& p,
                              const FrequencyGrid& grid, const IntegratorConfig& cfg,
                              int threads, SourceMask mask) {
    p.validate();
    grid.validate();

    const double rate = fastest_rate(state, p, grid);
    const double dt_req = resolve_dt(cfg, rate, p.gamma());
    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / dt_req));
    const double dt = cfg.t_end / static_cast<double>(n_steps);

    BareAmplitudes out;
    out.grid = grid;
    out.blocks = build_blocks(state, p);
    out.x_lo = state.n_min();
    out.x_hi = state.n_max() + 1;
    out.y_lo = std::max(0, state.n_min() - 1);
    out.y_hi = state.n_max();
    out.time = cfg.t_end;

    const int nx = out.x_hi - out.x_lo + 1;
    const int ny = out.y_hi - out.y_lo + 1;
    out.x.assign(static_cast<std::size_t>(grid.count),
                 std::vector<cplx>(static_cast<std::size_t>(nx)));
    out.y.assign(static_cast<std::size_t>(grid.count),
                 std::vector<cplx>(static_cast<std::size_t>(ny)));

    // Norm checkpoints across the second half of the run certify stationarity.
    std::vector<long> cp_steps;
    for (int k = 4; k <= 8; ++k)
        cp_steps.push_back(static_cast<long>(std::llround(n_steps * (k / 8.0))));
    out.checkpoint_times.clear();
    for (long s : cp_steps) out.checkpoint_times.push_back(static_cast<double>(s) * dt);
    out.checkpoint_block_norms.assign(
        static_cast<std::size_t>(grid.count),
        std::vector<std::vector<double>>(cp_steps.size(),
                                         std::vector<double>(out.blocks.size(), 0.0)));

    const Couplings c = couplings_from_rates(p);
    const cplx cg = std::conj(c.g);
    const cplx cgh = std::conj(c.ghat) * std::polar(1.0, -p.phi);
    const double gamma = p.gamma();
    const double gbar = p.gbar_mag;
    const bool with_g = mask != SourceMask::ghat_only;
    const bool with_ghat = mask != SourceMask::g_only;

    // Worst stationarity offender across all frequencies (absolute drift).
    std::vector<double> worst_drift(static_cast<std::size_t>(grid.count), 0.0);
    std::vector<int> worst_block(static_cast<std::size_t>(grid.count), 0);

    parallel_for(grid.count, threads, [&](int i) {
        const Detunings det = detunings(grid.omega(i), p);
        const std::size_t dim = static_cast<std::size_t>(nx + ny);
        std::vector<cplx> z(dim, cplx{0.0, 0.0});

        auto xs = [&](std::vector<cplx>& v, int n) -> cplx& {
            return v[static_cast<std::size_t>(n - out.x_lo)];
        };
        auto ys = [&](std::vector<cplx>& v, int n) -> cplx& {
            return v[static_cast<std::size_t>(nx + n - out.y_lo)];
        };

        auto deriv = [&](double t, std::vector<cplx>& zc, std::vector<cplx>& dz) {
            const double damp = std::exp(-0.5 * gamma * t);
            const cplx ex = std::polar(damp, det.delta * t);
            const cplx exh = std::polar(damp, det.delta_hat * t);
            for (int n = out.x_lo; n <= out.x_hi; ++n) {
                cplx acc{0.0, 0.0};
                if (with_g) acc -= cg * ex * state.amp(n);
                if (n >= 1 && n - 1 >= out.y_lo)
                    acc -= kI * (gbar * std::sqrt(static_cast<double>(n))) * ys(zc, n - 1);
                xs(dz, n) = acc;
            }
            for (int n = out.y_lo; n <= out.y_hi; ++n) {
                cplx acc{0.0, 0.0};
                if (with_ghat) acc += kI * cgh * exh * state.amp(n);
                acc -= kI * (gbar * std::sqrt(static_cast<double>(n + 1))) * xs(zc, n + 1);
                ys(dz, n) = acc;
            }
        };

        auto block_norm = [&](const Block& b) {
            if (b.m == -1) return std::norm(xs(z, 0));
            return std::norm(ys(z, b.m)) + std::norm(xs(z, b.m + 1));
        };

        std::size_t next_cp = 0;
        auto on_step = [&](long s) {
            if (next_cp < cp_steps.size() && s == cp_steps[next_cp]) {
                auto& slot = out.checkpoint_block_norms[static_cast<std::size_t>(i)][next_cp];
                for (std::size_t b = 0; b < out.blocks.size(); ++b)
                    slot[b] = block_norm(out.blocks[b]);
                ++next_cp;
            }
        };

        rk4_run(z, dt, n_steps, deriv, on_step);

        const auto& cps = out.checkpoint_block_norms[static_cast<std::size_t>(i)];
        for (std::size_t b = 0; b < out.blocks.size(); ++b) {
            const double final_norm = cps.back()[b];
            for (std::size_t cp = 0; cp + 1 < cps.size(); ++cp) {
                const double drift = std::abs(cps[cp][b] - final_norm);
                if (drift > worst_drift[static_cast<std::size_t>(i)]) {
                    worst_drift[static_cast<std::size_t>(i)] = drift;
                    worst_block[static_cast<std::size_t>(i)] = out.blocks[b].m;
                }
            }
        }

        for (int n = out.x_lo; n <= out.x_hi; ++n)
            out.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(n - out.x_lo)] = xs(z, n);
        for (int n = out.y_lo; n <= out.y_hi; ++n)
            out.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(n - out.y_lo)] = ys(z, n);
    });

    double drift = 0.0;
    int drift_block = 0;
    double drift_delta = 0.0;
    for (int i = 0; i < grid.count; ++i) {
        if (worst_drift[static_cast<std::size_t>(i)] > drift) {
            drift = worst_drift[static_cast<std::size_t>(i)];
            drift_block = worst_block[static_cast<std::size_t>(i)];
            drift_delta = detunings(grid.omega(i), p).delta;
        }
    }
    if (drift > cfg.stationarity_tol)
        throw NonConvergenceError(
            "steady state not reached: block m=" + std::to_string(drift_block) +
                " at delta=" + std::to_string(drift_delta) + " drifts by " +
                std::to_string(drift) + " across the last half of the run; extend t_end",
            drift, drift_block, drift_delta);

    return out;
}

SteadyAmplitudes steady_magnitudes_from_bare(const BareAmplitudes& bare) {
    SteadyAmplitudes out;
    out.grid = bare.grid;
    out.blocks = bare.blocks;
    out.mags.assign(out.blocks.size(),
                    std::vector<EigenmodeMagnitudes>(static_cast<std::size_t>(bare.grid.count)));
    for (std::size_t b = 0; b < out.blocks.size(); ++b) {
        const Block& blk = out.blocks[b];
        for (int i = 0; i < bare.grid.count; ++i) {
            EigenmodeMagnitudes em;
            if (blk.m == -1) {
                em.plus = std::abs(bare.X(i, 0));
            } else {
                const cplx xv = bare.X(i, blk.m + 1);
                const cplx yv = bare.Y(i, blk.m);
                em.plus = std::abs((xv + yv) * kInvSqrt2);
                em.minus = std::abs((xv - yv) * kInvSqrt2);
            }
            out.mags[b][static_cast<std::size_t>(i)] = em;
        }
    }
    return out;
}

FullBathResult full_bath_simulate(const FieldState& state, const SystemParams& p,
                                  const FullBathConfig& cfg) {
    p.validate();
    if (cfg.n_modes < 2) throw std::invalid_argument("bath needs n_modes >= 2");
    if (!(cfg.span > 0.0)) throw std::invalid_argument("bath needs span > 0");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("bath needs t_end > 0");

    const double spacing = cfg.span / static_cast<double>(cfg.n_modes);
    if (!(kTwoPi / spacing > cfg.t_end))
        throw ConfigError("recurrence horizon 2*pi/spacing = " +
                          std::to_string(kTwoPi / spacing) +
                          " does not exceed t_end; raise n_modes or shrink t_end");

    const double center = cfg.center_set ? cfg.center : -0.5 * p.omega21;
    std::vector<double> dk(static_cast<std::size_t>(cfg.n_modes));
    for (int k = 0; k < cfg.n_modes; ++k)
        dk[static_cast<std::size_t>(k)] =
            center - 0.5 * cfg.span + (static_cast<double>(k) + 0.5) * spacing;

    const Couplings c = couplings_from_rates(p);
    const double root = std::sqrt(p.density * spacing);
    const cplx gk = c.g * root;        // per-mode 3->1 coupling
    const cplx ghk = c.ghat * root;    // per-mode 3->2 coupling
    const cplx gk_c = std::conj(gk);
    const cplx ghk_src = std::conj(ghk) * std::polar(1.0, -p.phi);  // Y-slot source factor
    const cplx ghk_feed = ghk * std::polar(1.0, p.phi);             // C3 feedback factor
    const double gbar = p.gbar_mag;

    // One bath shared by both pathways for parallel dipoles; one bath per
    // pathway for orthogonal dipoles (the flag never touches gamma).
    struct Section {
        bool source_x, source_y, feed_x, feed_y;
    };
    std::vector<Section> sections;
    if (p.interference) {
        sections.push_back(Section{true, true, true, true});
    } else {
        sections.push_back(Section{true, false, true, false});
        sections.push_back(Section{false, true, false, true});
    }

    const int n_lo = state.n_min();
    const int n_hi = state.n_max();
    const int nc = n_hi - n_lo + 1;
    const int x_lo = n_lo, x_hi = n_hi + 1;
    const int y_lo = std::max(0, n_lo - 1), y_hi = n_hi;
    const int nx = x_hi - x_lo + 1;
    const int ny = y_hi - y_lo + 1;
    const std::size_t per_section =
        static_cast<std::size_t>(cfg.n_modes) * static_cast<std::size_t>(nx + ny);
    const std::size_t dim = static_cast<std::size_t>(nc) + sections.size() * per_section;

    // Layout: [C3 range | section 0: modes x (X slots, Y slots) | section 1 ...]
    auto c3_at = [&](std::vector<cplx>& z, int n) -> cplx& {
        return z[static_cast<std::size_t>(n - n_lo)];
    };
    auto x_at = [&](std::vector<cplx>& z, std::size_t s, int k, int n) -> cplx& {
        return z[static_cast<std::size_t>(nc) + s * per_section +
                 static_cast<std::size_t>(k) * static_cast<std::size_t>(nx + ny) +
                 static_cast<std::size_t>(n - x_lo)];
    };
    auto y_at = [&](std::vector<cplx>& z, std::size_t s, int k, int n) -> cplx& {
        return z[static_cast<std::size_t>(nc) + s * per_section +
                 static_cast<std::size_t>(k) * static_cast<std::size_t>(nx + ny) +
                 static_cast<std::size_t>(nx) + static_cast<std::size_t>(n - y_lo)];
    };

    std::vector<cplx> z(dim, cplx{0.0, 0.0});
    for (int n = n_lo; n <= n_hi; ++n) c3_at(z, n) = state.amp(n);

    const double vmax = gbar * std::sqrt(static_cast<double>(x_hi));
    const double rate = std::max({p.gamma(), vmax, std::abs(center) + 0.5 * cfg.span,
                                  std::abs(center) + 0.5 * cfg.span + p.omega21});
    double dt = cfg.dt == 0.0 ? cfg.dt_factor / rate : cfg.dt;
    if (!(dt > 0.0)) throw std::invalid_argument("bath step must be > 0");
    if (dt > IntegratorConfig::kMaxDtFactor / rate)
        throw std::invalid_argument("bath step too coarse: dt must be <= 0.05 / (band-edge rate)");
    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / dt));
    dt = cfg.t_end / static_cast<double>(n_steps);

    // Phase caches reused by every derivative evaluation.
    std::vector<cplx> em(static_cast<std::size_t>(cfg.n_modes));   // e^{-i delta_k t}
    std::vector<cplx> emh(static_cast<std::size_t>(cfg.n_modes));  // e^{-i delta_hat_k t}

    auto deriv = [&](double t, std::vector<cplx>& zc, std::vector<cplx>& dz) {
        const cplx rot21 = std::polar(1.0, -p.omega21 * t);
        for (int k = 0; k < cfg.n_modes; ++k) {
            em[static_cast<std::size_t>(k)] = std::polar(1.0, -dk[static_cast<std::size_t>(k)] * t);
            emh[static_cast<std::size_t>(k)] = em[static_cast<std::size_t>(k)] * rot21;
        }
        for (int n = n_lo; n <= n_hi; ++n) {
            cplx acc{0.0, 0.0};
            for (std::size_t s = 0; s < sections.size(); ++s) {
                if (sections[s].feed_x) {
                    cplx sum{0.0, 0.0};
                    for (int k = 0; k < cfg.n_modes; ++k)
                        sum += em[static_cast<std::size_t>(k)] * x_at(zc, s, k, n);
                    acc += gk * sum;
                }
                if (sections[s].feed_y) {
                    cplx sum{0.0, 0.0};
                    for (int k = 0; k < cfg.n_modes; ++k)
                        sum += emh[static_cast<std::size_t>(k)] * y_at(zc, s, k, n);
                    acc += kI * ghk_feed * sum;
                }
            }
            c3_at(dz, n) = acc;
        }
        for (std::size_t s = 0; s < sections.size(); ++s) {
            for (int k = 0; k < cfg.n_modes; ++k) {
                const cplx ex = std::conj(em[static_cast<std::size_t>(k)]);
                const cplx exh = std::conj(emh[static_cast<std::size_t>(k)]);
                for (int n = x_lo; n <= x_hi; ++n) {
                    cplx acc{0.0, 0.0};
                    if (sections[s].source_x && n >= n_lo && n <= n_hi)
                        acc -= gk_c * ex * c3_at(zc, n);
                    if (n >= 1 && n - 1 >= y_lo)
                        acc -= kI * (gbar * std::sqrt(static_cast<double>(n))) * y_at(zc, s, k, n - 1);
                    x_at(dz, s, k, n) = acc;
                }
                for (int n = y_lo; n <= y_hi; ++n) {
                    cplx acc{0.0, 0.0};
                    if (sections[s].source_y && n >= n_lo && n <= n_hi)
                        acc += kI * ghk_src * exh * c3_at(zc, n);
                    acc -= kI * (gbar * std::sqrt(static_cast<double>(n + 1))) * x_at(zc, s, k, n + 1);
                    y_at(dz, s, k, n) = acc;
                }
            }
        }
    };

    FullBathResult out;
    out.mode_detunings = dk;
    const long stride = std::max<long>(1, static_cast<long>(std::llround(cfg.trace_stride / dt)));

    auto total_norm = [&]() {
        double s = 0.0;
        for (const cplx& v : z) s += std::norm(v);
        return s;
    };
    auto upper_pop = [&]() {
        double s = 0.0;
        for (int n = n_lo; n <= n_hi; ++n) s += std::norm(c3_at(z, n));
        return s;
    };

    out.times.push_back(0.0);
    out.upper_population.push_back(upper_pop());
    out.total_norm_drift = std::abs(total_norm() - 1.0);

    auto on_step = [&](long s) {
        if (s % stride == 0 || s == n_steps) {
            out.times.push_back(static_cast<double>(s) * dt);
            out.upper_population.push_back(upper_pop());
            out.total_norm_drift = std::max(out.total_norm_drift, std::abs(total_norm() - 1.0));
        }
    };

    rk4_run(z, dt, n_steps, deriv, on_step);

    out.mode_populations.assign(static_cast<std::size_t>(cfg.n_modes), 0.0);
    for (std::size_t s = 0; s < sections.size(); ++s)
        for (int k = 0; k < cfg.n_modes; ++k) {
            double pk = 0.0;
            for (int n = x_lo; n <= x_hi; ++n) pk += std::norm(x_at(z, s, k, n));
            for (int n = y_lo; n <= y_hi; ++n) pk += std::norm(y_at(z, s, k, n));
            out.mode_populations[static_cast<std::size_t>(k)] += pk;
        }
    out.spectrum.resize(out.mode_populations.size());
    for (std::size_t k = 0; k < out.mode_populations.size(); ++k)
        out.spectrum[k] = out.mode_populations[k] / spacing;

    return out;
}

}  // namespace lambdasim
