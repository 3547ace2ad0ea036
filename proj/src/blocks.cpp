#include "lambdasim/blocks.hpp"

#include <cmath>
#include <stdexcept>

#include "lambdasim/parallel.hpp"

namespace lambdasim {

namespace {
const cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline bool populated(const cplx& a) { return a != cplx{0.0, 0.0}; }

// Steady-state kernel of a decaying source rotating at detuning x.
inline cplx kernel(double half_gamma, double x) {
    return 1.0 / cplx{half_gamma, -x};
}
}  // namespace

std::vector<Block> build_blocks(const FieldState& state, const SystemParams& p) {
    p.validate();
    std::vector<Block> out;
    if (state.n_min() == 0 && populated(state.amp(0)))
        out.push_back(Block{-1, 0.0, state.amp(0), cplx{0.0, 0.0}});
    for (int m = std::max(0, state.n_min() - 1); m <= state.n_max(); ++m) {
        const cplx cy = state.amp(m);      // feeds |2,m>
        const cplx cx = state.amp(m + 1);  // feeds |1,m+1>
        if (!populated(cx) && !populated(cy)) continue;
        out.push_back(Block{m, p.gbar_mag * std::sqrt(static_cast<double>(m + 1)), cx, cy});
    }
    return out;
}

BlockSteadyParts solve_block_steady_parts(const Block& b, double delta, const SystemParams& p) {
    const Couplings c = couplings_from_rates(p);
    const double hg = 0.5 * p.gamma();
    const cplx s_x = -std::conj(c.g) * b.src_x;

    if (b.m == -1) {
        // lone |1,0> slot: no partner, no drive splitting, no 1/sqrt(2)
        return BlockSteadyParts{s_x * kernel(hg, delta), {}, {}, {}};
    }

    const cplx s_y = kI * std::conj(c.ghat) * std::polar(1.0, -p.phi) * b.src_y;
    const double dh = delta + p.omega21;
    return BlockSteadyParts{
        kInvSqrt2 * s_x * kernel(hg, delta + b.v),
        kInvSqrt2 * s_y * kernel(hg, dh + b.v),
        kInvSqrt2 * s_x * kernel(hg, delta - b.v),
        -kInvSqrt2 * s_y * kernel(hg, dh - b.v),
    };
}

EigenmodeMagnitudes solve_block_steady(const Block& b, double delta, const SystemParams& p) {
    const BlockSteadyParts w = solve_block_steady_parts(b, delta, p);
    if (p.interference)
        return EigenmodeMagnitudes{std::abs(w.plus_g + w.plus_ghat),
                                   std::abs(w.minus_g + w.minus_ghat)};
    return EigenmodeMagnitudes{
        std::sqrt(std::norm(w.plus_g) + std::norm(w.plus_ghat)),
        std::sqrt(std::norm(w.minus_g) + std::norm(w.minus_ghat)),
    };
}

int SteadyAmplitudes::block_position(int m) const {
    for (std::size_t b = 0; b < blocks.size(); ++b)
        if (blocks[b].m == m) return static_cast<int>(b);
    throw std::invalid_argument("no block with ladder index m = " + std::to_string(m));
}

SteadyAmplitudes steady_amplitudes(const FieldState& state, const SystemParams& p,
                                   const FrequencyGrid& grid, int threads) {
    p.validate();
    grid.validate();
    SteadyAmplitudes out;
    out.grid = grid;
    out.blocks = build_blocks(state, p);
    out.mags.assign(out.blocks.size(),
                    std::vector<EigenmodeMagnitudes>(static_cast<std::size_t>(grid.count)));
    parallel_for(grid.count, threads, [&](int i) {
        const double delta = detunings(grid.omega(i), p).delta;
        for (std::size_t b = 0; b < out.blocks.size(); ++b)
            out.mags[b][static_cast<std::size_t>(i)] =
                solve_block_steady(out.blocks[b], delta, p);
    });
    return out;
}

}  // namespace lambdasim
