"""Emission spectra of a three-level Lambda emitter with a quantized drive.

Thin Python face of the compiled core: parameter/grid types, drive-field
states, the closed-form block solver, time-domain reference integrators,
spectrum analysis metrics, scenario configuration, and the named
verification checks.
"""

from ._lambdasim import (  # noqa: F401
    BareAmplitudes,
    BarePair,
    Block,
    BlockSteadyParts,
    CheckResult,
    ComparisonReport,
    ConfigError,
    Couplings,
    Detunings,
    DipResult,
    DressedPair,
    EigenmodeMagnitudes,
    FieldState,
    FrequencyGrid,
    FullBathConfig,
    FullBathResult,
    IntegratorConfig,
    NonConvergenceError,
    PartialRates,
    PhaseTable,
    PhaseTableCell,
    ScenarioConfig,
    SolverKind,
    SourceMask,
    Spectrum,
    SpectrumMeta,
    StateFamily,
    SteadyAmplitudes,
    SystemParams,
    TruncationError,
    assemble_spectrum,
    bare_from_dressed,
    build_blocks,
    classical_reference_spectrum,
    compare_spectra,
    compute_phase_table,
    couplings_from_rates,
    detunings,
    dip_metric,
    dressed_from_bare,
    find_peaks,
    full_bath_simulate,
    integrate_bare,
    phase_averaged_spectrum,
    rates_from_couplings,
    read_spectrum_csv,
    restricted_spectrum,
    run_acceptance,
    run_verify,
    scaled_spectrum,
    solve_block_steady,
    solve_block_steady_parts,
    spectrum_from_bare,
    steady_amplitudes,
    steady_magnitudes_from_bare,
    upper_state_amplitude,
    write_spectrum_csv,
)
from ._lambdasim import __version__  # noqa: F401
