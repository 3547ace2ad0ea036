// Python bindings for the emission-spectrum library. The module mirrors the
// C++ API one-to-one; everything heavy stays in the compiled core.
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lambdasim/blocks.hpp"
#include "lambdasim/checks.hpp"
#include "lambdasim/errors.hpp"
#include "lambdasim/field_state.hpp"
#include "lambdasim/io.hpp"
#include "lambdasim/params.hpp"
#include "lambdasim/scenario.hpp"
#include "lambdasim/spectrum.hpp"
#include "lambdasim/time_domain.hpp"

namespace py = pybind11;
using namespace lambdasim;

PYBIND11_MODULE(_lambdasim, m) {
    m.doc() = "Emission spectra of a three-level Lambda emitter whose lower "
              "states are bridged by a quantized drive field";
    m.attr("__version__") = "0.1.0";

    py::register_exception<TruncationError>(m, "TruncationError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);

    // --- parameters and grids -------------------------------------------
    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("gamma1", &SystemParams::gamma1)
        .def_readwrite("gamma2", &SystemParams::gamma2)
        .def_readwrite("omega21", &SystemParams::omega21)
        .def_readwrite("gbar_mag", &SystemParams::gbar_mag)
        .def_readwrite("phi", &SystemParams::phi)
        .def_readwrite("phi_g", &SystemParams::phi_g)
        .def_readwrite("phi_ghat", &SystemParams::phi_ghat)
        .def_readwrite("density", &SystemParams::density)
        .def_readwrite("interference", &SystemParams::interference)
        .def("gamma", &SystemParams::gamma)
        .def("validate", &SystemParams::validate);

    py::class_<FrequencyGrid>(m, "FrequencyGrid")
        .def(py::init<>())
        .def(py::init([](double lo, double hi, int count) {
                 FrequencyGrid g{lo, hi, count};
                 g.validate();
                 return g;
             }),
             py::arg("lo"), py::arg("hi"), py::arg("count"))
        .def_readwrite("lo", &FrequencyGrid::lo)
        .def_readwrite("hi", &FrequencyGrid::hi)
        .def_readwrite("count", &FrequencyGrid::count)
        .def("spacing", &FrequencyGrid::spacing)
        .def("omega", &FrequencyGrid::omega, py::arg("i"))
        .def("omegas",
             [](const FrequencyGrid& g) {
                 std::vector<double> w(static_cast<std::size_t>(g.count));
                 for (int i = 0; i < g.count; ++i) w[static_cast<std::size_t>(i)] = g.omega(i);
                 return w;
             })
        .def("validate", &FrequencyGrid::validate)
        .def("__eq__", [](const FrequencyGrid& a, const FrequencyGrid& b) { return a == b; });

    py::class_<Detunings>(m, "Detunings")
        .def_readonly("delta", &Detunings::delta)
        .def_readonly("delta_hat", &Detunings::delta_hat);
    m.def("detunings", &detunings, py::arg("omega"), py::arg("params"),
          "Both detunings of a frequency sample");

    py::class_<Couplings>(m, "Couplings")
        .def_readonly("g", &Couplings::g)
        .def_readonly("ghat", &Couplings::ghat);
    m.def("couplings_from_rates", &couplings_from_rates, py::arg("params"));

    py::class_<PartialRates>(m, "PartialRates")
        .def_readonly("gamma1", &PartialRates::gamma1)
        .def_readonly("gamma2", &PartialRates::gamma2);
    m.def("rates_from_couplings", &rates_from_couplings, py::arg("g"), py::arg("ghat"),
          py::arg("density"));

    py::class_<DressedPair>(m, "DressedPair")
        .def_readonly("plus", &DressedPair::plus)
        .def_readonly("minus", &DressedPair::minus);
    py::class_<BarePair>(m, "BarePair")
        .def_readonly("x_amp", &BarePair::x_amp)
        .def_readonly("y_amp", &BarePair::y_amp);
    m.def("dressed_from_bare", &dressed_from_bare, py::arg("x_amp"), py::arg("y_amp"),
          py::arg("phi"));
    m.def("bare_from_dressed", &bare_from_dressed, py::arg("plus"), py::arg("minus"),
          py::arg("phi"));

    // --- drive-field states ----------------------------------------------
    py::class_<FieldState>(m, "FieldState")
        .def_static("coherent", &FieldState::coherent, py::arg("alpha_mag"),
                    py::arg("phi_alpha") = 0.0, py::arg("sigmas") = 6.0)
        .def_static("single_fock", &FieldState::single_fock, py::arg("n0"))
        .def_static("adjacent_window", &FieldState::adjacent_window, py::arg("n0"),
                    py::arg("width"), py::arg("phi_alpha") = 0.0)
        .def_static("separated_fock", &FieldState::separated_fock, py::arg("n0"),
                    py::arg("offsets"), py::arg("phi_alpha") = 0.0)
        .def_static("raw", &FieldState::raw, py::arg("n_min"), py::arg("amplitudes"))
        .def("n_min", &FieldState::n_min)
        .def("n_max", &FieldState::n_max)
        .def("amp", &FieldState::amp, py::arg("n"))
        .def("norm_sq", &FieldState::norm_sq)
        .def("amps", [](const FieldState& s) { return s.amps(); });

    // --- ladder blocks and the closed-form solver -------------------------
    py::class_<Block>(m, "Block")
        .def(py::init([](int mm, double v, cplx sx, cplx sy) {
                 return Block{mm, v, sx, sy};
             }),
             py::arg("m"), py::arg("v"), py::arg("src_x"), py::arg("src_y"))
        .def_readwrite("m", &Block::m)
        .def_readwrite("v", &Block::v)
        .def_readwrite("src_x", &Block::src_x)
        .def_readwrite("src_y", &Block::src_y);
    m.def("build_blocks", &build_blocks, py::arg("state"), py::arg("params"));

    py::class_<EigenmodeMagnitudes>(m, "EigenmodeMagnitudes")
        .def_readonly("plus", &EigenmodeMagnitudes::plus)
        .def_readonly("minus", &EigenmodeMagnitudes::minus)
        .def("sum_sq", &EigenmodeMagnitudes::sum_sq);
    py::class_<BlockSteadyParts>(m, "BlockSteadyParts")
        .def_readonly("plus_g", &BlockSteadyParts::plus_g)
        .def_readonly("plus_ghat", &BlockSteadyParts::plus_ghat)
        .def_readonly("minus_g", &BlockSteadyParts::minus_g)
        .def_readonly("minus_ghat", &BlockSteadyParts::minus_ghat);
    m.def("solve_block_steady", &solve_block_steady, py::arg("block"), py::arg("delta"),
          py::arg("params"));
    m.def("solve_block_steady_parts", &solve_block_steady_parts, py::arg("block"),
          py::arg("delta"), py::arg("params"));

    py::class_<SteadyAmplitudes>(m, "SteadyAmplitudes")
        .def_readonly("grid", &SteadyAmplitudes::grid)
        .def_readonly("blocks", &SteadyAmplitudes::blocks)
        .def("block_position", &SteadyAmplitudes::block_position, py::arg("m"))
        .def("mag",
             [](const SteadyAmplitudes& s, int b, int i) {
                 return s.mags.at(static_cast<std::size_t>(b)).at(static_cast<std::size_t>(i));
             },
             py::arg("block_index"), py::arg("grid_index"));
    m.def("steady_amplitudes", &steady_amplitudes, py::arg("state"), py::arg("params"),
          py::arg("grid"), py::arg("threads") = 1);

    // --- spectra and analysis ----------------------------------------------
    py::class_<SpectrumMeta>(m, "SpectrumMeta")
        .def_readonly("scenario", &SpectrumMeta::scenario)
        .def_readonly("norm", &SpectrumMeta::norm);
    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("grid", &Spectrum::grid)
        .def_readonly("values", &Spectrum::values)
        .def_readonly("meta", &Spectrum::meta);

    m.def("assemble_spectrum", &assemble_spectrum, py::arg("amplitudes"), py::arg("params"),
          py::arg("scenario") = std::string{});
    m.def("classical_reference_spectrum", &classical_reference_spectrum, py::arg("params"),
          py::arg("omega_rabi"), py::arg("phi_c"), py::arg("grid"), py::arg("threads") = 1);
    m.def("phase_averaged_spectrum", &phase_averaged_spectrum, py::arg("builder"),
          py::arg("m_phases"));
    m.def("restricted_spectrum", &restricted_spectrum, py::arg("amplitudes"), py::arg("m"),
          py::arg("params"));
    m.def("scaled_spectrum", &scaled_spectrum, py::arg("spectrum"), py::arg("factor"));

    py::class_<DipResult>(m, "DipResult")
        .def_readonly("location", &DipResult::location)
        .def_readonly("value", &DipResult::value);
    m.def("dip_metric", &dip_metric, py::arg("spectrum"), py::arg("window_lo"),
          py::arg("window_hi"));
    m.def("find_peaks", &find_peaks, py::arg("spectrum"));

    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("l2_rel", &ComparisonReport::l2_rel)
        .def_readonly("sup_rel", &ComparisonReport::sup_rel)
        .def_readonly("peaks_a", &ComparisonReport::peaks_a)
        .def_readonly("peaks_b", &ComparisonReport::peaks_b)
        .def_readonly("dip_a", &ComparisonReport::dip_a);
    m.def("compare_spectra", &compare_spectra, py::arg("a"), py::arg("b"));

    // --- time-domain reference solvers ---------------------------------
    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("dt", &IntegratorConfig::dt)
        .def_readwrite("t_end", &IntegratorConfig::t_end)
        .def_readwrite("dt_factor", &IntegratorConfig::dt_factor)
        .def_readwrite("stationarity_tol", &IntegratorConfig::stationarity_tol);

    py::enum_<SourceMask>(m, "SourceMask")
        .value("both", SourceMask::both)
        .value("g_only", SourceMask::g_only)
        .value("ghat_only", SourceMask::ghat_only);

    py::class_<BareAmplitudes>(m, "BareAmplitudes")
        .def_readonly("grid", &BareAmplitudes::grid)
        .def_readonly("x_lo", &BareAmplitudes::x_lo)
        .def_readonly("x_hi", &BareAmplitudes::x_hi)
        .def_readonly("y_lo", &BareAmplitudes::y_lo)
        .def_readonly("y_hi", &BareAmplitudes::y_hi)
        .def_readonly("time", &BareAmplitudes::time)
        .def("X", &BareAmplitudes::X, py::arg("grid_index"), py::arg("n"))
        .def("Y", &BareAmplitudes::Y, py::arg("grid_index"), py::arg("n"));

    m.def("upper_state_amplitude", &upper_state_amplitude, py::arg("c0"), py::arg("t"),
          py::arg("params"));
    m.def("integrate_bare", &integrate_bare, py::arg("state"), py::arg("params"),
          py::arg("grid"), py::arg("config"), py::arg("threads") = 1,
          py::arg("mask") = SourceMask::both,
          py::call_guard<py::gil_scoped_release>());
    m.def("steady_magnitudes_from_bare", &steady_magnitudes_from_bare, py::arg("bare"));
    m.def("spectrum_from_bare", &spectrum_from_bare, py::arg("bare"), py::arg("params"),
          py::arg("scenario") = std::string{});

    py::class_<FullBathConfig>(m, "FullBathConfig")
        .def(py::init<>())
        .def_readwrite("n_modes", &FullBathConfig::n_modes)
        .def_readwrite("span", &FullBathConfig::span)
        .def_readwrite("t_end", &FullBathConfig::t_end)
        .def_readwrite("dt", &FullBathConfig::dt)
        .def_readwrite("dt_factor", &FullBathConfig::dt_factor)
        .def_readwrite("center", &FullBathConfig::center)
        .def_readwrite("center_set", &FullBathConfig::center_set)
        .def_readwrite("trace_stride", &FullBathConfig::trace_stride);
    py::class_<FullBathResult>(m, "FullBathResult")
        .def_readonly("times", &FullBathResult::times)
        .def_readonly("upper_population", &FullBathResult::upper_population)
        .def_readonly("mode_detunings", &FullBathResult::mode_detunings)
        .def_readonly("mode_populations", &FullBathResult::mode_populations)
        .def_readonly("spectrum", &FullBathResult::spectrum)
        .def_readonly("total_norm_drift", &FullBathResult::total_norm_drift);
    m.def("full_bath_simulate", &full_bath_simulate, py::arg("state"), py::arg("params"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>());

    // --- scenario configuration --------------------------------------------
    py::enum_<SolverKind>(m, "SolverKind")
        .value("fast", SolverKind::fast)
        .value("oracle", SolverKind::oracle)
        .value("both", SolverKind::both);
    py::enum_<StateFamily>(m, "StateFamily")
        .value("coherent", StateFamily::coherent)
        .value("fock", StateFamily::fock)
        .value("window", StateFamily::window)
        .value("separated", StateFamily::separated);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_static("from_kv", &ScenarioConfig::from_kv, py::arg("kv"))
        .def_static("load", &ScenarioConfig::load, py::arg("path"), py::arg("overrides"))
        .def_readwrite("params", &ScenarioConfig::params)
        .def_readwrite("family", &ScenarioConfig::family)
        .def_readwrite("alpha_mag", &ScenarioConfig::alpha_mag)
        .def_readwrite("phi_alpha", &ScenarioConfig::phi_alpha)
        .def_readwrite("sigmas", &ScenarioConfig::sigmas)
        .def_readwrite("n0", &ScenarioConfig::n0)
        .def_readwrite("width", &ScenarioConfig::width)
        .def_readwrite("kappas", &ScenarioConfig::kappas)
        .def_readwrite("grid", &ScenarioConfig::grid)
        .def_readwrite("solver", &ScenarioConfig::solver)
        .def_readwrite("oracle", &ScenarioConfig::oracle)
        .def("build_state", &ScenarioConfig::build_state)
        .def("build_state_with_phase", &ScenarioConfig::build_state_with_phase,
             py::arg("phi_alpha"))
        .def("classical_rabi", &ScenarioConfig::classical_rabi)
        .def("descriptor", &ScenarioConfig::descriptor)
        .def("resolved_kv", &ScenarioConfig::resolved_kv)
        .def("validate", &ScenarioConfig::validate);

    // --- file artifacts -------------------------------------------------
    m.def("write_spectrum_csv", &write_spectrum_csv, py::arg("path"), py::arg("spectrum"),
          py::arg("header_kv") = std::vector<std::pair<std::string, std::string>>{});
    m.def("read_spectrum_csv",
          [](const std::string& path) {
              SpectrumFile f = read_spectrum_csv(path);
              return py::make_tuple(f.spectrum, f.header);
          },
          py::arg("path"), "Returns (spectrum, header_dict)");

    // --- named verification checks ------------------------------------------
    py::class_<checks::CheckResult>(m, "CheckResult")
        .def_readonly("name", &checks::CheckResult::name)
        .def_readonly("passed", &checks::CheckResult::pass)
        .def_readonly("elapsed_s", &checks::CheckResult::elapsed_s)
        .def_readonly("detail", &checks::CheckResult::detail);
    py::class_<checks::PhaseTableCell>(m, "PhaseTableCell")
        .def_readonly("row", &checks::PhaseTableCell::row)
        .def_readonly("col", &checks::PhaseTableCell::col)
        .def_readonly("phi_alpha", &checks::PhaseTableCell::phi_alpha)
        .def_readonly("phi", &checks::PhaseTableCell::phi)
        .def_readonly("l2", &checks::PhaseTableCell::l2)
        .def_readonly("best", &checks::PhaseTableCell::best)
        .def_readonly("margin", &checks::PhaseTableCell::margin);
    py::class_<checks::PhaseTable>(m, "PhaseTable")
        .def_readonly("letters", &checks::PhaseTable::letters)
        .def_readonly("cells", &checks::PhaseTable::cells)
        .def_readonly("worst_best_l2", &checks::PhaseTable::worst_best_l2)
        .def_readonly("min_margin", &checks::PhaseTable::min_margin)
        .def_readonly("matches_expected", &checks::PhaseTable::matches_expected);
    m.def("compute_phase_table", &checks::compute_phase_table, py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_acceptance",
          [](const std::vector<int>& only, int threads) {
              py::gil_scoped_release release;
              return checks::run_acceptance(only, threads);
          },
          py::arg("only") = std::vector<int>{}, py::arg("threads") = 0);
    m.def("run_verify",
          [](bool full, int threads) {
              py::gil_scoped_release release;
              return checks::run_verify(full, threads);
          },
          py::arg("full") = false, py::arg("threads") = 0);
}
