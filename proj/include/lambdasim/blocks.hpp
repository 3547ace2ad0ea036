// blocks.hpp — Decomposition of the emission problem into independent 2x2
// ladder blocks and their closed-form steady amplitudes.
//
// After adiabatic elimination of the exponentially decaying upper state, the
// one-photon amplitudes split into closed pairs indexed by m >= 0:
//
//   block m couples { Y[m] = |2,m> slot , X[m+1] = |1,m+1> slot }
//
// with drive matrix element v = |gbar| sqrt(m+1). The |1,m+1> slot is fed by
// the upper amplitude C[m+1], the |2,m> slot by C[m]. If photon number 0 is
// populated there is additionally the unpaired block m = -1 holding the lone
// |1,0> slot (v = 0). The eigenmodes of a pair are w± = (X ± Y)/sqrt(2),
// which coincide with the dressed-state amplitudes of params.hpp.
//
// Closed form (re-derived from the bare amplitude equations and certified
// against the RK4 oracle in the test suites): with K(x) = 1/(gamma/2 - i x),
// source weights s_x = -conj(g) C[m+1], s_y = +i conj(ghat) e^{-i phi} C[m],
//
//   |w±(inf)| = |( s_x K(delta ± v) ± s_y K(delta_hat ± v) )| / sqrt(2)
//
// and for m = -1 simply |X[0](inf)| = |s_x K(delta)|.
#pragma once

#include <vector>

#include "lambdasim/field_state.hpp"
#include "lambdasim/params.hpp"

namespace lambdasim {

struct Block {
    int m{0};        // ladder index, >= -1
    double v{0.0};   // drive matrix element |gbar| sqrt(m+1)
    cplx src_x;      // upper amplitude feeding the |1,m+1> slot (C[m+1])
    cplx src_y;      // upper amplitude feeding the |2,m> slot   (C[m])
};

// Every block with at least one nonzero source, ordered by ascending m.
std::vector<Block> build_blocks(const FieldState& state, const SystemParams& p);

// Steady magnitudes of the two drive eigenmodes of one block. For m = -1 the
// single slot magnitude is reported in `plus` and `minus` is 0.
struct EigenmodeMagnitudes {
    double plus{0.0};
    double minus{0.0};
    double sum_sq() const { return plus * plus + minus * minus; }
};

// The four pathway contributions to the eigenmode steady amplitudes, kept
// separate per vacuum coupling so cross terms can be retained or dropped:
// w+ = plus_g + plus_ghat, w- = minus_g + minus_ghat.
struct BlockSteadyParts {
    cplx plus_g, plus_ghat;
    cplx minus_g, minus_ghat;
};

BlockSteadyParts solve_block_steady_parts(const Block& b, double delta, const SystemParams& p);

// Combines the pathway parts according to p.interference: coherently for
// parallel dipoles, incoherently (cross terms dropped) for orthogonal ones.
EigenmodeMagnitudes solve_block_steady(const Block& b, double delta, const SystemParams& p);

// Steady eigenmode magnitudes for every block at every grid sample.
struct SteadyAmplitudes {
    FrequencyGrid grid;
    std::vector<Block> blocks;
    // mags[b][i] belongs to blocks[b] at grid.omega(i)
    std::vector<std::vector<EigenmodeMagnitudes>> mags;

    // Index into `blocks` of ladder index m; throws std::invalid_argument if absent.
    int block_position(int m) const;
};

SteadyAmplitudes steady_amplitudes(const FieldState& state, const SystemParams& p,
                                   const FrequencyGrid& grid, int threads = 1);

}  // namespace lambdasim
