// checks.hpp — Named verification checks: the acceptance criteria that gate
// the artifact and the invariant suite behind the `verify` subcommand.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace lambdasim::checks {

struct CheckResult {
    std::string name;
    bool pass{false};
    double elapsed_s{0.0};
    std::string detail;
};

using Reporter = std::function<void(const CheckResult&)>;

// The 3x3 quantized-vs-classical phase-equivalence table: rows sweep the
// state phase phi_alpha over {0, pi/2, pi}, columns sweep the drive phase phi
// over the same values; each cell is matched against the four classical
// references phi_c in {0, pi/2, pi, 3pi/2} (letters a..d).
struct PhaseTableCell {
    int row{0}, col{0};
    double phi_alpha{0.0}, phi{0.0};
    std::array<double, 4> l2{};  // distance to each reference
    int best{0};                 // argmin reference index
    double margin{0.0};          // runner-up l2 / best l2
};

struct PhaseTable {
    std::array<std::array<int, 3>, 3> letters{};  // best reference per cell
    std::vector<PhaseTableCell> cells;
    double worst_best_l2{0.0};
    double min_margin{0.0};
    bool matches_expected{false};

    static constexpr std::array<std::array<int, 3>, 3> kExpected{
        {{0, 1, 2}, {1, 2, 3}, {2, 3, 0}}};
};

PhaseTable compute_phase_table(int threads);

// Acceptance criteria in numbered order (1-based). `only` empty runs all.
// Each finished check is handed to `report` as soon as it completes.
std::vector<CheckResult> run_acceptance(const std::vector<int>& only, int threads,
                                        const Reporter& report = {});

// Invariant suite plus the fast acceptance criteria; `full` adds the
// discrete-bath validations. Stops after the first failure when
// `stop_on_failure` is set (the CLI behavior).
std::vector<CheckResult> run_verify(bool full, int threads, const Reporter& report = {},
                                    bool stop_on_failure = false);

}  // namespace lambdasim::checks
