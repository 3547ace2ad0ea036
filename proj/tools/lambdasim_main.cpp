// lambdasim_main.cpp — Command-line surface: scenario spectra, the phase
// table, parameter sweeps, spectrum comparison, and the verification suite.
//
// Exit codes: 0 success; 1 verification/table mismatch or I/O failure;
// 2 configuration error; 3 numerical non-convergence (oracle paths).
// Environment: LAMBDASIM_THREADS (thread count, 0 = auto) and LAMBDASIM_OUT
// (output directory) provide defaults that explicit flags override.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lambdasim/checks.hpp"
#include "lambdasim/errors.hpp"
#include "lambdasim/io.hpp"
#include "lambdasim/scenario.hpp"
#include "lambdasim/spectrum.hpp"
#include "lambdasim/time_domain.hpp"

namespace {

using namespace lambdasim;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    int threads = -1;  // -1: unset, fall back to env / auto
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_config = true) {
    if (with_config)
        cmd->add_option("--config", args.config_path,
                        "Scenario file of key=value lines ('#' comments allowed)");
    cmd->add_option("--set", args.sets,
                    "Override one scenario key, e.g. --set gamma1=0.4 (repeatable)")
        ->type_name("KEY=VALUE");
    cmd->add_option("--out", args.out_dir,
                    "Output directory (default: $LAMBDASIM_OUT, else '.')");
    cmd->add_option("--threads", args.threads,
                    "Worker threads, 0 = all cores (default: $LAMBDASIM_THREADS, else 0)");
}

int resolve_thread_arg(const CommonArgs& args) {
    if (args.threads >= 0) return args.threads;
    if (const char* env = std::getenv("LAMBDASIM_THREADS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (const std::exception&) {
            throw ConfigError("LAMBDASIM_THREADS is not an integer");
        }
    }
    return 0;
}

std::filesystem::path resolve_out_dir(const CommonArgs& args) {
    std::string dir = args.out_dir;
    if (dir.empty())
        if (const char* env = std::getenv("LAMBDASIM_OUT")) dir = env;
    if (dir.empty()) dir = ".";
    std::filesystem::create_directories(dir);
    return dir;
}

ScenarioConfig load_scenario(const CommonArgs& args) {
    ScenarioConfig cfg = ScenarioConfig::load(args.config_path, parse_kv_args(args.sets));
    cfg.validate();
    return cfg;
}

ordered_json config_json(const ScenarioConfig& cfg) {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : cfg.resolved_kv()) j[k] = v;
    return j;
}

// The spectrum of a scenario via the closed-form block solver.
Spectrum fast_spectrum(const ScenarioConfig& cfg, int threads) {
    return assemble_spectrum(steady_amplitudes(cfg.build_state(), cfg.params, cfg.grid, threads),
                             cfg.params, cfg.descriptor());
}

// The same spectrum via direct RK4 integration. With the interference flag
// off the cross-term-free result is the sum of the two single-pathway runs.
struct OracleRun {
    Spectrum spectrum;
    std::optional<SteadyAmplitudes> mags;  // absent when interference is off
};

OracleRun oracle_spectrum(const ScenarioConfig& cfg, int threads) {
    const FieldState state = cfg.build_state();
    OracleRun run;
    if (cfg.params.interference) {
        const BareAmplitudes bare =
            integrate_bare(state, cfg.params, cfg.grid, cfg.oracle, threads, SourceMask::both);
        run.spectrum = spectrum_from_bare(bare, cfg.params, cfg.descriptor() + " [oracle]");
        run.mags = steady_magnitudes_from_bare(bare);
        return run;
    }
    const BareAmplitudes g_only =
        integrate_bare(state, cfg.params, cfg.grid, cfg.oracle, threads, SourceMask::g_only);
    const BareAmplitudes ghat_only =
        integrate_bare(state, cfg.params, cfg.grid, cfg.oracle, threads, SourceMask::ghat_only);
    Spectrum a = spectrum_from_bare(g_only, cfg.params, cfg.descriptor() + " [oracle]");
    const Spectrum b = spectrum_from_bare(ghat_only, cfg.params, "");
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
    a.meta.norm += b.meta.norm;
    run.spectrum = std::move(a);
    return run;
}

// Largest relative eigenmode-magnitude deviation between the two solvers.
double max_mag_deviation(const SteadyAmplitudes& fast, const SteadyAmplitudes& slow) {
    double worst = 0.0;
    for (std::size_t b = 0; b < fast.blocks.size(); ++b)
        for (int i = 0; i < fast.grid.count; ++i) {
            const auto& f = fast.mags[b][static_cast<std::size_t>(i)];
            const auto& s = slow.mags[b][static_cast<std::size_t>(i)];
            if (s.plus > 0.0) worst = std::max(worst, std::abs(f.plus - s.plus) / s.plus);
            if (s.minus > 0.0) worst = std::max(worst, std::abs(f.minus - s.minus) / s.minus);
        }
    return worst;
}

int cmd_spectrum(const CommonArgs& args) {
    const ScenarioConfig cfg = load_scenario(args);
    const int threads = resolve_thread_arg(args);
    const auto out = resolve_out_dir(args);
    const auto header = cfg.resolved_kv();

    ordered_json meta;
    meta["descriptor"] = cfg.descriptor();
    meta["config"] = config_json(cfg);

    std::optional<Spectrum> fast, oracle;
    std::optional<SteadyAmplitudes> fast_mags, oracle_mags;
    if (cfg.solver == SolverKind::fast || cfg.solver == SolverKind::both) {
        fast_mags = steady_amplitudes(cfg.build_state(), cfg.params, cfg.grid, threads);
        fast = assemble_spectrum(*fast_mags, cfg.params, cfg.descriptor());
    }
    if (cfg.solver == SolverKind::oracle || cfg.solver == SolverKind::both) {
        OracleRun run = oracle_spectrum(cfg, threads);
        oracle = std::move(run.spectrum);
        oracle_mags = std::move(run.mags);
    }

    const Spectrum& primary = fast ? *fast : *oracle;
    write_spectrum_csv(out / "spectrum.csv", primary, header);
    meta["norm"] = primary.meta.norm;
    {
        const auto peaks = find_peaks(primary);
        meta["peaks"] = peaks;
        const DipResult dip = dip_metric(primary, primary.grid.lo, primary.grid.hi);
        meta["min"] = ordered_json{{"detuning", dip.location}, {"value", dip.value}};
    }

    if (fast && oracle) {
        write_spectrum_csv(out / "spectrum_oracle.csv", *oracle, header);
        const ComparisonReport rep = compare_spectra(*fast, *oracle);
        ordered_json cross = comparison_report_to_json(rep);
        if (oracle_mags) cross["max_mag_rel_dev"] = max_mag_deviation(*fast_mags, *oracle_mags);
        meta["crosscheck"] = cross;
        write_json_file(out / "crosscheck.json", cross);
        std::cout << "cross-check max spectrum deviation (sup_rel): " << fmt_double(rep.sup_rel)
                  << "\n";
    }

    write_json_file(out / "spectrum.meta.json", meta);
    std::cout << "wrote " << (out / "spectrum.csv").string() << " (norm "
              << fmt_double(primary.meta.norm) << ")\n";
    return kExitOk;
}

int cmd_table1(const CommonArgs& args) {
    const int threads = resolve_thread_arg(args);
    const auto out = resolve_out_dir(args);
    const checks::PhaseTable table = checks::compute_phase_table(threads);

    static const char* kLetters = "abcd";
    static const char* kPhaseNames[3] = {"0", "pi/2", "pi"};
    std::cout << "drive phase ->      0     pi/2      pi\n";
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < 3; ++r) {
        std::cout << "state phase " << kPhaseNames[r]
                  << std::string(5 - std::string(kPhaseNames[r]).size(), ' ') << ":";
        for (int c = 0; c < 3; ++c)
            std::cout << "      " << kLetters[table.letters[static_cast<std::size_t>(r)]
                                                            [static_cast<std::size_t>(c)]];
        std::cout << "\n";
    }
    for (const auto& cell : table.cells) {
        ordered_json jc;
        jc["state_phase"] = cell.phi_alpha;
        jc["drive_phase"] = cell.phi;
        jc["best_reference"] = std::string(1, kLetters[cell.best]);
        jc["l2_rel"] = cell.l2;
        jc["margin"] = cell.margin;
        rows.push_back(jc);
    }
    ordered_json j;
    j["expected"] = "[[a,b,c],[b,c,d],[c,d,a]]";
    j["matches_expected"] = table.matches_expected;
    j["worst_l2_rel"] = table.worst_best_l2;
    j["min_margin"] = table.min_margin;
    j["cells"] = rows;
    write_json_file(out / "table1.json", j);

    const bool pass =
        table.matches_expected && table.worst_best_l2 <= 0.05 && table.min_margin >= 2.0;
    std::cout << "worst l2_rel " << fmt_double(table.worst_best_l2) << ", min margin "
              << fmt_double(table.min_margin) << (pass ? " -- PASS" : " -- FAIL") << "\n";
    return pass ? kExitOk : kExitFailure;
}

struct SweepArgs {
    std::string kind;
    std::vector<double> values;
    double window_lo = 4.0;
    double window_hi = 5.5;
};

// The scenario's spectrum by whichever solver the config selects ('both'
// defers to the closed-form result; the oracle is its cross-check).
Spectrum scenario_spectrum(const ScenarioConfig& cfg, int threads) {
    if (cfg.solver == SolverKind::oracle) return oracle_spectrum(cfg, threads).spectrum;
    return fast_spectrum(cfg, threads);
}

int cmd_sweep(const CommonArgs& args, const SweepArgs& sw) {
    if (sw.values.empty()) throw ConfigError("sweep needs at least one --values entry");
    if (sw.kind != "w21" && sw.kind != "width" && sw.kind != "phase")
        throw ConfigError("sweep kind must be one of: w21, width, phase");
    if (!(sw.window_lo < sw.window_hi))
        throw ConfigError("sweep dip window must satisfy lo < hi");

    const ScenarioConfig base = load_scenario(args);
    const int threads = resolve_thread_arg(args);
    const auto out = resolve_out_dir(args);

    // Metric per kind: dip value inside the window for w21/phase sweeps,
    // l2 distance to the matching classical reference for width sweeps.
    const bool dip_kind = sw.kind != "width";
    std::optional<Spectrum> classical_ref;
    if (!dip_kind) {
        if (base.family != StateFamily::window)
            throw ConfigError("width sweeps need state.family=window");
        classical_ref = classical_reference_spectrum(
            base.params, base.classical_rabi(), base.params.phi + base.phi_alpha, base.grid,
            threads);
    }

    std::vector<std::pair<double, double>> rows;
    for (double v : sw.values) {
        ScenarioConfig cfg = base;
        double metric = 0.0;
        if (sw.kind == "w21") {
            cfg.params.omega21 = v;
        } else if (sw.kind == "phase") {
            cfg.params.phi = v;
        } else {
            const int w = static_cast<int>(std::llround(v));
            if (std::abs(v - static_cast<double>(w)) > 1e-9)
                throw ConfigError("width sweep values must be integers");
            cfg.width = w;
        }
        cfg.validate();
        const Spectrum s = scenario_spectrum(cfg, threads);
        metric = dip_kind ? dip_metric(s, sw.window_lo, sw.window_hi).value
                          : compare_spectra(s, *classical_ref).l2_rel;
        rows.emplace_back(v, metric);
    }

    const auto path = out / "sweep.csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "# kind=" << sw.kind << "\n";
    f << "# metric=" << (dip_kind ? "dip_value" : "l2_to_classical") << "\n";
    if (dip_kind)
        f << "# window=[" << fmt_double(sw.window_lo) << "," << fmt_double(sw.window_hi) << "]\n";
    for (const auto& [k, v] : base.resolved_kv()) f << "# " << k << "=" << v << "\n";
    f << "# columns=value,metric\n";
    for (const auto& [v, m] : rows) f << fmt_double(v) << "," << fmt_double(m) << "\n";
    f.close();
    if (!f) throw std::runtime_error("failed writing " + path.string());

    std::cout << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_compare(const CommonArgs& args, const std::string& path_a, const std::string& path_b) {
    const auto out = resolve_out_dir(args);
    const SpectrumFile a = read_spectrum_csv(path_a);
    const SpectrumFile b = read_spectrum_csv(path_b);
    const ComparisonReport rep = compare_spectra(a.spectrum, b.spectrum);
    ordered_json j = comparison_report_to_json(rep);
    j["a"] = path_a;
    j["b"] = path_b;
    write_json_file(out / "compare.json", j);
    std::cout << "l2_rel " << fmt_double(rep.l2_rel) << ", sup_rel " << fmt_double(rep.sup_rel)
              << "; wrote " << (out / "compare.json").string() << "\n";
    return kExitOk;
}

int cmd_verify(const CommonArgs& args, const std::string& level) {
    if (level != "quick" && level != "full")
        throw ConfigError("verify level must be 'quick' or 'full'");
    const int threads = resolve_thread_arg(args);
    bool all_pass = true;
    const auto results = checks::run_verify(
        level == "full", threads,
        [&](const checks::CheckResult& r) {
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " ("
                      << fmt_double(r.elapsed_s) << " s): " << r.detail << "\n"
                      << std::flush;
        },
        /*stop_on_failure=*/true);
    for (const auto& r : results) all_pass = all_pass && r.pass;
    std::cout << (all_pass ? "verify: all checks passed\n" : "verify: FAILED\n");
    return all_pass ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Emission-spectrum simulator for a three-level Lambda emitter with a "
        "quantized drive between its lower states"};
    app.require_subcommand(1);

    CommonArgs spectrum_args;
    CLI::App* spectrum_cmd =
        app.add_subcommand("spectrum", "Compute one scenario's emission spectrum (CSV + JSON)");
    add_common(spectrum_cmd, spectrum_args);

    CommonArgs table_args;
    CLI::App* table_cmd = app.add_subcommand(
        "table1", "Classify the 3x3 (state phase, drive phase) grid against the four "
                  "classical reference phases");
    add_common(table_cmd, table_args, /*with_config=*/false);

    CommonArgs sweep_args;
    SweepArgs sweep_extra;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Sweep one parameter and tabulate a spectrum metric");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--kind", sweep_extra.kind, "One of: w21, width, phase")->required();
    sweep_cmd->add_option("--values", sweep_extra.values, "Comma-separated sweep values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--window-lo", sweep_extra.window_lo,
                          "Dip search window lower edge (default 4)");
    sweep_cmd->add_option("--window-hi", sweep_extra.window_hi,
                          "Dip search window upper edge (default 5.5)");

    CommonArgs compare_args;
    std::string compare_a, compare_b;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Compare two spectrum CSV files on the same grid");
    add_common(compare_cmd, compare_args, /*with_config=*/false);
    compare_cmd->add_option("--a", compare_a, "First spectrum CSV")->required();
    compare_cmd->add_option("--b", compare_b, "Second spectrum CSV")->required();

    CommonArgs verify_args;
    std::string verify_level = "quick";
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run the invariant suite (quick) or everything (full)");
    add_common(verify_cmd, verify_args, /*with_config=*/false);
    verify_cmd->add_option("--level", verify_level, "quick (default) or full");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum_args);
        if (table_cmd->parsed()) return cmd_table1(table_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, sweep_extra);
        if (compare_cmd->parsed()) return cmd_compare(compare_args, compare_a, compare_b);
        if (verify_cmd->parsed()) return cmd_verify(verify_args, verify_level);
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const TruncationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitConfig;
}
