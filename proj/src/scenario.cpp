#include "lambdasim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "lambdasim/errors.hpp"
#include "lambdasim/io.hpp"

namespace lambdasim {

namespace {

const std::set<std::string> kKnownKeys = {
    "gamma1", "gamma2", "omega21", "gbar_mag", "phi", "phi_g", "phi_ghat", "density",
    "interference",
    "state.family", "state.alpha_mag", "state.phi_alpha", "state.sigmas", "state.n0",
    "state.width", "state.kappas",
    "grid.lo", "grid.hi", "grid.count",
    "solver", "oracle.dt", "oracle.t_end", "oracle.dt_factor",
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': malformed number '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': malformed integer '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError("config key '" + key + "': malformed boolean '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("config key '" + key + "': empty list entry");
        out.push_back(to_int(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::string family_name(StateFamily f) {
    switch (f) {
        case StateFamily::coherent: return "coherent";
        case StateFamily::fock: return "fock";
        case StateFamily::window: return "window";
        case StateFamily::separated: return "separated";
    }
    return "?";
}

std::string solver_name(SolverKind s) {
    switch (s) {
        case SolverKind::fast: return "fast";
        case SolverKind::oracle: return "oracle";
        case SolverKind::both: return "both";
    }
    return "?";
}

std::string int_list_to_string(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_kv(
    const std::vector<std::pair<std::string, std::string>>& kv) {
    ScenarioConfig c;
    for (const auto& [key, value] : kv) {
        if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
        if (key == "gamma1") c.params.gamma1 = to_double(key, value);
        else if (key == "gamma2") c.params.gamma2 = to_double(key, value);
        else if (key == "omega21") c.params.omega21 = to_double(key, value);
        else if (key == "gbar_mag") c.params.gbar_mag = to_double(key, value);
        else if (key == "phi") c.params.phi = to_double(key, value);
        else if (key == "phi_g") c.params.phi_g = to_double(key, value);
        else if (key == "phi_ghat") c.params.phi_ghat = to_double(key, value);
        else if (key == "density") c.params.density = to_double(key, value);
        else if (key == "interference") c.params.interference = to_bool(key, value);
        else if (key == "state.family") {
            if (value == "coherent") c.family = StateFamily::coherent;
            else if (value == "fock") c.family = StateFamily::fock;
            else if (value == "window") c.family = StateFamily::window;
            else if (value == "separated") c.family = StateFamily::separated;
            else throw ConfigError("state.family must be coherent|fock|window|separated");
        } else if (key == "state.alpha_mag") c.alpha_mag = to_double(key, value);
        else if (key == "state.phi_alpha") c.phi_alpha = to_double(key, value);
        else if (key == "state.sigmas") c.sigmas = to_double(key, value);
        else if (key == "state.n0") c.n0 = to_int(key, value);
        else if (key == "state.width") c.width = to_int(key, value);
        else if (key == "state.kappas") c.kappas = to_int_list(key, value);
        else if (key == "grid.lo") c.grid.lo = to_double(key, value);
        else if (key == "grid.hi") c.grid.hi = to_double(key, value);
        else if (key == "grid.count") c.grid.count = to_int(key, value);
        else if (key == "solver") {
            if (value == "fast") c.solver = SolverKind::fast;
            else if (value == "oracle") c.solver = SolverKind::oracle;
            else if (value == "both") c.solver = SolverKind::both;
            else throw ConfigError("solver must be fast|oracle|both");
        } else if (key == "oracle.dt") c.oracle.dt = to_double(key, value);
        else if (key == "oracle.t_end") c.oracle.t_end = to_double(key, value);
        else if (key == "oracle.dt_factor") c.oracle.dt_factor = to_double(key, value);
    }
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::load(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::vector<std::pair<std::string, std::string>> kv;
    if (!path.empty()) kv = parse_kv_file(path);
    // Later entries win: drop earlier duplicates so from_kv sees the winner.
    for (const auto& ov : overrides) {
        kv.erase(std::remove_if(kv.begin(), kv.end(),
                                [&](const auto& e) { return e.first == ov.first; }),
                 kv.end());
        kv.push_back(ov);
    }
    return from_kv(kv);
}

void ScenarioConfig::validate() const {
    params.validate();
    grid.validate();
    switch (family) {
        case StateFamily::coherent:
            if (!(alpha_mag > 0.0)) throw ConfigError("state.alpha_mag must be > 0");
            if (!(sigmas >= 4.0)) throw ConfigError("state.sigmas must be >= 4");
            break;
        case StateFamily::fock:
            if (n0 < 0) throw ConfigError("state.n0 must be >= 0");
            break;
        case StateFamily::window:
            if (width < 0) throw ConfigError("state.width must be >= 0");
            if (n0 - width < 0) throw ConfigError("window needs state.n0 - state.width >= 0");
            break;
        case StateFamily::separated:
            break;  // offsets are validated by the constructor
    }
}

FieldState ScenarioConfig::build_state() const { return build_state_with_phase(phi_alpha); }

FieldState ScenarioConfig::build_state_with_phase(double phase) const {
    switch (family) {
        case StateFamily::coherent: return FieldState::coherent(alpha_mag, phase, sigmas);
        case StateFamily::fock: return FieldState::single_fock(n0);
        case StateFamily::window: return FieldState::adjacent_window(n0, width, phase);
        case StateFamily::separated: return FieldState::separated_fock(n0, kappas, phase);
    }
    throw ConfigError("unreachable state family");
}

double ScenarioConfig::classical_rabi() const {
    if (family == StateFamily::coherent) return params.gbar_mag * alpha_mag;
    return params.gbar_mag * std::sqrt(static_cast<double>(n0 + 1));
}

std::string ScenarioConfig::descriptor() const {
    std::string s = family_name(family) + "(";
    switch (family) {
        case StateFamily::coherent:
            s += "alpha_mag=" + fmt_double(alpha_mag) + ",phi_alpha=" + fmt_double(phi_alpha) +
                 ",sigmas=" + fmt_double(sigmas);
            break;
        case StateFamily::fock:
            s += "n0=" + std::to_string(n0);
            break;
        case StateFamily::window:
            s += "n0=" + std::to_string(n0) + ",width=" + std::to_string(width) +
                 ",phi_alpha=" + fmt_double(phi_alpha);
            break;
        case StateFamily::separated:
            s += "n0=" + std::to_string(n0) + ",kappas=" + int_list_to_string(kappas) +
                 ",phi_alpha=" + fmt_double(phi_alpha);
            break;
    }
    s += "),solver=" + solver_name(solver);
    return s;
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::resolved_kv() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("gamma1", fmt_double(params.gamma1));
    kv.emplace_back("gamma2", fmt_double(params.gamma2));
    kv.emplace_back("omega21", fmt_double(params.omega21));
    kv.emplace_back("gbar_mag", fmt_double(params.gbar_mag));
    kv.emplace_back("phi", fmt_double(params.phi));
    kv.emplace_back("phi_g", fmt_double(params.phi_g));
    kv.emplace_back("phi_ghat", fmt_double(params.phi_ghat));
    kv.emplace_back("density", fmt_double(params.density));
    kv.emplace_back("interference", params.interference ? "true" : "false");
    kv.emplace_back("state.family", family_name(family));
    switch (family) {
        case StateFamily::coherent:
            kv.emplace_back("state.alpha_mag", fmt_double(alpha_mag));
            kv.emplace_back("state.phi_alpha", fmt_double(phi_alpha));
            kv.emplace_back("state.sigmas", fmt_double(sigmas));
            break;
        case StateFamily::fock:
            kv.emplace_back("state.n0", std::to_string(n0));
            break;
        case StateFamily::window:
            kv.emplace_back("state.n0", std::to_string(n0));
            kv.emplace_back("state.width", std::to_string(width));
            kv.emplace_back("state.phi_alpha", fmt_double(phi_alpha));
            break;
        case StateFamily::separated:
            kv.emplace_back("state.n0", std::to_string(n0));
            kv.emplace_back("state.kappas", int_list_to_string(kappas));
            kv.emplace_back("state.phi_alpha", fmt_double(phi_alpha));
            break;
    }
    kv.emplace_back("grid.lo", fmt_double(grid.lo));
    kv.emplace_back("grid.hi", fmt_double(grid.hi));
    kv.emplace_back("grid.count", std::to_string(grid.count));
    kv.emplace_back("solver", solver_name(solver));
    if (solver != SolverKind::fast) {
        kv.emplace_back("oracle.dt", fmt_double(oracle.dt));
        kv.emplace_back("oracle.t_end", fmt_double(oracle.t_end));
        kv.emplace_back("oracle.dt_factor", fmt_double(oracle.dt_factor));
    }
    return kv;
}

std::vector<std::pair<std::string, std::string>> parse_kv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv.emplace_back(key, value);
    }
    return kv;
}

std::vector<std::pair<std::string, std::string>> parse_kv_args(
    const std::vector<std::string>& args) {
    std::vector<std::pair<std::string, std::string>> kv;
    for (const std::string& a : args) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--set expects key=value, got '" + a + "'");
        kv.emplace_back(trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
    }
    return kv;
}

}  // namespace lambdasim
