// Scenario configuration parsing and deterministic artifact serialization.
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "lambdasim/errors.hpp"
#include "lambdasim/io.hpp"
#include "lambdasim/scenario.hpp"
#include "lambdasim/spectrum.hpp"

using namespace lambdasim;
namespace fs = std::filesystem;

namespace {

// RAII temp file that disappears with the test case.
struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name, const std::string& content = "")
        : path(fs::temp_directory_path() / name) {
        if (!content.empty()) {
            std::ofstream f(path, std::ios::binary);
            f << content;
        }
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("full-precision doubles survive a text round trip") {
    const double samples[] = {0.1,    1.0 / 3.0, -2.5e-308, 1e300, 0.02,
                              M_PI,   5.0 / std::sqrt(401.0), -0.0,  42.0};
    for (double v : samples) {
        const std::string text = fmt_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
}

TEST_CASE("spectrum CSV writes and reads back bit-identically") {
    SystemParams p;
    const Spectrum s = classical_reference_spectrum(p, 1.5, 0.2, FrequencyGrid{-2.0, 2.0, 9});
    TempFile file("lambdasim_io_roundtrip.csv");
    write_spectrum_csv(file.str(), s, {{"alpha", "1.5"}, {"note", "free text"}});

    const SpectrumFile back = read_spectrum_csv(file.str());
    CHECK(back.header.at("alpha") == "1.5");
    CHECK(back.header.at("note") == "free text");
    CHECK(back.header.at("scenario") == s.meta.scenario);
    CHECK(back.spectrum.grid == s.grid);
    CHECK(back.spectrum.grid.lo == s.grid.lo);
    CHECK(back.spectrum.grid.hi == s.grid.hi);
    REQUIRE(back.spectrum.values.size() == s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i)
        CHECK(back.spectrum.values[i] == s.values[i]);
    CHECK(back.spectrum.meta.norm == s.meta.norm);
    CHECK(back.spectrum.meta.scenario == s.meta.scenario);
}

TEST_CASE("headerless CSV rows still define a grid") {
    TempFile file("lambdasim_io_bare.csv", "0,1\n0.5,2\n1,3\n");
    const SpectrumFile back = read_spectrum_csv(file.str());
    CHECK(back.spectrum.grid.lo == 0.0);
    CHECK(back.spectrum.grid.hi == 1.0);
    CHECK(back.spectrum.grid.count == 3);
    CHECK(back.spectrum.values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(back.header.empty());
}

TEST_CASE("malformed spectrum files are rejected") {
    {
        TempFile f("lambdasim_io_nocomma.csv", "0,1\nbroken row\n1,3\n");
        CHECK_THROWS_AS(read_spectrum_csv(f.str()), ConfigError);
    }
    {
        TempFile f("lambdasim_io_short.csv", "0,1\n");
        CHECK_THROWS_AS(read_spectrum_csv(f.str()), ConfigError);
    }
    {
        TempFile f("lambdasim_io_badcount.csv",
                   "# grid.lo=0\n# grid.hi=1\n# grid.count=5\n0,1\n0.5,2\n1,3\n");
        CHECK_THROWS_AS(read_spectrum_csv(f.str()), ConfigError);
    }
    {
        TempFile f("lambdasim_io_badnum.csv", "0,1\n0.5,banana\n1,3\n");
        CHECK_THROWS_AS(read_spectrum_csv(f.str()), ConfigError);
    }
    CHECK_THROWS_AS(read_spectrum_csv("/nonexistent/lambdasim.csv"), ConfigError);
}

TEST_CASE("field states serialize to JSON and back exactly") {
    const std::vector<cplx> amps{cplx{0.5, 0.0}, cplx{-0.3, 0.2}, cplx{0.1, -0.7}};
    const FieldState state = FieldState::raw(3, amps);
    const FieldState back = field_state_from_json(field_state_to_json(state));
    CHECK(back.n_min() == 3);
    REQUIRE(back.amps().size() == amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) CHECK(back.amps()[i] == amps[i]);

    CHECK_THROWS_AS(field_state_from_json(ordered_json{{"n_min", 0}}), ConfigError);
    CHECK_THROWS_AS(
        field_state_from_json(ordered_json{{"n_min", 0}, {"amplitudes", {{1.0, 2.0, 3.0}}}}),
        ConfigError);
}

TEST_CASE("comparison reports serialize with all metric fields") {
    ComparisonReport r;
    r.l2_rel = 0.25;
    r.sup_rel = 0.5;
    r.peaks_a = {1.0, 2.0};
    r.peaks_b = {1.5};
    r.dip_a = DipResult{4.5, 1e-3};
    const ordered_json j = comparison_report_to_json(r);
    CHECK(j.at("l2_rel").get<double>() == 0.25);
    CHECK(j.at("sup_rel").get<double>() == 0.5);
    CHECK(j.at("peaks_a").get<std::vector<double>>() == r.peaks_a);
    CHECK(j.at("peaks_b").get<std::vector<double>>() == r.peaks_b);
    CHECK(j.at("dip_a").at("location").get<double>() == 4.5);
    CHECK(j.at("dip_a").at("value").get<double>() == 1e-3);
}

TEST_CASE("JSON artifacts end with a newline and parse back") {
    TempFile file("lambdasim_io_pretty.json");
    const ordered_json j{{"a", 1}, {"b", {{"c", 2.5}}}};
    write_json_file(file.str(), j);
    const std::string text = slurp(file.str());
    REQUIRE(!text.empty());
    CHECK(text.back() == '\n');
    CHECK(ordered_json::parse(text) == j);
}

TEST_CASE("scenario defaults describe the reference coherent run") {
    const ScenarioConfig c = ScenarioConfig::from_kv({});
    CHECK(c.family == StateFamily::coherent);
    CHECK(c.alpha_mag == 20.0);
    CHECK(c.phi_alpha == 0.0);
    CHECK(c.sigmas == 6.0);
    CHECK(c.grid == FrequencyGrid{-40.0, 40.0, 4001});
    CHECK(c.solver == SolverKind::fast);
    CHECK(c.params.gamma1 == 0.5);
    CHECK(c.params.gamma2 == 0.5);
    CHECK(c.params.omega21 == 1.0);
    CHECK(c.params.gbar_mag == 0.25);
    CHECK(c.params.interference);
    CHECK(!c.descriptor().empty());
    CHECK(c.descriptor().find("coherent") != std::string::npos);
}

TEST_CASE("every config key lands on its field") {
    const ScenarioConfig c = ScenarioConfig::from_kv({
        {"gamma1", "0.3"},
        {"gamma2", "0.7"},
        {"omega21", "1.3"},
        {"gbar_mag", "0.5"},
        {"phi", "0.9"},
        {"phi_g", "0.1"},
        {"phi_ghat", "-0.2"},
        {"density", "2"},
        {"interference", "off"},
        {"state.family", "separated"},
        {"state.n0", "50"},
        {"state.kappas", "0, 2, 4"},
        {"state.phi_alpha", "0.6"},
        {"grid.lo", "-10"},
        {"grid.hi", "10"},
        {"grid.count", "801"},
        {"solver", "both"},
        {"oracle.dt", "0.001"},
        {"oracle.t_end", "80"},
        {"oracle.dt_factor", "0.004"},
    });
    CHECK(c.params.gamma1 == 0.3);
    CHECK(c.params.gamma2 == 0.7);
    CHECK(c.params.omega21 == 1.3);
    CHECK(c.params.gbar_mag == 0.5);
    CHECK(c.params.phi == 0.9);
    CHECK(c.params.phi_g == 0.1);
    CHECK(c.params.phi_ghat == -0.2);
    CHECK(c.params.density == 2.0);
    CHECK(!c.params.interference);
    CHECK(c.family == StateFamily::separated);
    CHECK(c.n0 == 50);
    CHECK(c.kappas == std::vector<int>{0, 2, 4});
    CHECK(c.phi_alpha == 0.6);
    CHECK(c.grid == FrequencyGrid{-10.0, 10.0, 801});
    CHECK(c.solver == SolverKind::both);
    CHECK(c.oracle.dt == 0.001);
    CHECK(c.oracle.t_end == 80.0);
    CHECK(c.oracle.dt_factor == 0.004);
}

TEST_CASE("strict parsing rejects unknown keys and malformed values") {
    using KV = std::vector<std::pair<std::string, std::string>>;
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"no_such_key", "1"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"gamma1", "banana"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"grid.count", "4001x"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"interference", "maybe"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"state.family", "squeezed"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"solver", "magic"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"state.kappas", ""}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"state.kappas", "0,,4"}}), ConfigError);
}

TEST_CASE("per-family validation rejects inconsistent states") {
    using KV = std::vector<std::pair<std::string, std::string>>;
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"state.alpha_mag", "0"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"state.sigmas", "3"}}), ConfigError);
    CHECK_THROWS_AS(
        ScenarioConfig::from_kv(KV{{"state.family", "fock"}, {"state.n0", "-1"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_kv(
                        KV{{"state.family", "window"}, {"state.n0", "2"}, {"state.width", "3"}}),
                    ConfigError);
    // Adjacent separated components are caught when the state is built.
    const ScenarioConfig c = ScenarioConfig::from_kv(
        KV{{"state.family", "separated"}, {"state.n0", "10"}, {"state.kappas", "0,1"}});
    CHECK_THROWS_AS(c.build_state(), std::invalid_argument);
    // Physical parameter errors surface through the shared validator.
    CHECK_THROWS_AS(ScenarioConfig::from_kv(KV{{"gamma1", "-1"}}), std::invalid_argument);
}

TEST_CASE("config files support comments and command-line overrides win") {
    TempFile file("lambdasim_scenario.cfg",
                  "# reference run\n"
                  "gamma1 = 0.3   # inline comment\n"
                  "gamma2 = 0.7\n"
                  "\n"
                  "state.family = fock\n"
                  "state.n0 = 12\n");
    const ScenarioConfig c = ScenarioConfig::load(file.str(), parse_kv_args({"gamma1=0.4"}));
    CHECK(c.params.gamma1 == 0.4);  // override beats the file
    CHECK(c.params.gamma2 == 0.7);
    CHECK(c.family == StateFamily::fock);
    CHECK(c.n0 == 12);
}

TEST_CASE("config file syntax errors are rejected") {
    {
        TempFile f("lambdasim_dup.cfg", "gamma1 = 0.3\ngamma1 = 0.4\n");
        CHECK_THROWS_AS(ScenarioConfig::load(f.str(), {}), ConfigError);
    }
    {
        TempFile f("lambdasim_noeq.cfg", "gamma1 0.3\n");
        CHECK_THROWS_AS(ScenarioConfig::load(f.str(), {}), ConfigError);
    }
    {
        TempFile f("lambdasim_nokey.cfg", "= 0.3\n");
        CHECK_THROWS_AS(ScenarioConfig::load(f.str(), {}), ConfigError);
    }
    CHECK_THROWS_AS(ScenarioConfig::load("/nonexistent/lambdasim.cfg", {}), ConfigError);
    CHECK_THROWS_AS(parse_kv_args({"novalue"}), ConfigError);
    CHECK_THROWS_AS(parse_kv_args({"=v"}), ConfigError);
}

TEST_CASE("resolved key set reproduces the exact configuration") {
    using KV = std::vector<std::pair<std::string, std::string>>;
    const ScenarioConfig c = ScenarioConfig::from_kv(KV{
        {"state.family", "window"},
        {"state.n0", "400"},
        {"state.width", "2"},
        {"state.phi_alpha", "0.25"},
        {"solver", "both"},
        {"oracle.t_end", "120"},
    });
    const auto kv = c.resolved_kv();
    const ScenarioConfig back = ScenarioConfig::from_kv(kv);
    CHECK(back.resolved_kv() == kv);
    CHECK(back.oracle.t_end == 120.0);

    // Integrator keys are omitted when no integrator will run.
    const auto fast_kv = ScenarioConfig::from_kv({}).resolved_kv();
    for (const auto& [k, v] : fast_kv) CHECK(k.rfind("oracle.", 0) != 0);
}

TEST_CASE("scenario states and classical mapping match their definitions") {
    using KV = std::vector<std::pair<std::string, std::string>>;

    ScenarioConfig coherent = ScenarioConfig::from_kv(
        KV{{"state.alpha_mag", "2"}, {"state.sigmas", "12"}});
    CHECK(coherent.classical_rabi() == 0.25 * 2.0);
    CHECK(coherent.build_state().n_min() == 0);

    ScenarioConfig fock = ScenarioConfig::from_kv(
        KV{{"state.family", "fock"}, {"state.n0", "400"}});
    CHECK(fock.classical_rabi() == 0.25 * std::sqrt(401.0));
    const FieldState fs_fock = fock.build_state();
    CHECK(fs_fock.n_min() == 400);
    CHECK(fs_fock.amps().size() == 1);

    ScenarioConfig window = ScenarioConfig::from_kv(
        KV{{"state.family", "window"}, {"state.n0", "10"}, {"state.width", "2"},
           {"state.phi_alpha", "0.4"}});
    const FieldState fs_window = window.build_state();
    CHECK(fs_window.n_min() == 8);
    CHECK(fs_window.amps().size() == 5);
    // The phase override rebuilds the same geometry with a new ramp.
    const FieldState rebuilt = window.build_state_with_phase(0.0);
    CHECK(std::abs(std::abs(rebuilt.amps()[1]) - std::abs(fs_window.amps()[1])) <= 1e-15);
    CHECK(std::abs(std::arg(rebuilt.amps()[1])) <= 1e-15);

    ScenarioConfig sep = ScenarioConfig::from_kv(
        KV{{"state.family", "separated"}, {"state.n0", "50"}, {"state.kappas", "-2,0,2"}});
    const FieldState fs_sep = sep.build_state();
    CHECK(fs_sep.n_min() == 48);
    CHECK(fs_sep.amps().size() == 5);
}
