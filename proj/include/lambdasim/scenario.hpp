// scenario.hpp — Flat key=value scenario configuration shared by the CLI and
// the python bindings. Unknown keys are rejected; command-line overrides win
// over file values; every artifact embeds the fully resolved set.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lambdasim/field_state.hpp"
#include "lambdasim/params.hpp"
#include "lambdasim/time_domain.hpp"

namespace lambdasim {

enum class SolverKind { fast, oracle, both };
enum class StateFamily { coherent, fock, window, separated };

struct ScenarioConfig {
    SystemParams params;

    StateFamily family{StateFamily::coherent};
    double alpha_mag{20.0};
    double phi_alpha{0.0};
    double sigmas{6.0};
    int n0{400};
    int width{1};
    std::vector<int> kappas{0, 2, 4};

    FrequencyGrid grid{-40.0, 40.0, 4001};
    SolverKind solver{SolverKind::fast};
    IntegratorConfig oracle{};

    // Strict parser: every key must be known, every value well-formed.
    static ScenarioConfig from_kv(const std::vector<std::pair<std::string, std::string>>& kv);

    // Reads `path` (empty = defaults only) and applies `overrides` on top.
    static ScenarioConfig load(const std::string& path,
                               const std::vector<std::pair<std::string, std::string>>& overrides);

    // The drive-field state of this scenario; the override variant swaps the
    // state phase (used by phase averaging).
    FieldState build_state() const;
    FieldState build_state_with_phase(double phi_alpha_override) const;

    // Rabi magnitude of the matching classical drive: |gbar|*alpha_mag for
    // coherent states, |gbar|*sqrt(n0+1) for number states.
    double classical_rabi() const;

    // One-line description used in artifact metadata.
    std::string descriptor() const;

    // Every key with its resolved value, in canonical order and formatting.
    std::vector<std::pair<std::string, std::string>> resolved_kv() const;

    void validate() const;
};

// key = value lines; '#' starts a comment; blank lines ignored.
// Throws ConfigError on syntax errors or duplicate keys.
std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path);

// "key=value" strings, e.g. from repeated --set flags.
std::vector<std::pair<std::string, std::string>> parse_kv_args(const std::vector<std::string>& args);

}  // namespace lambdasim
