"""Cavity-mediated controlled-phase-flip gates with finite-length photon
pulses: reflection spectra, pulse propagation, gate error budgets, and the
parameter-space maps that decide whether a given cavity clears the
fault-tolerance threshold.
"""

from .ftqc import DEFAULT_FIT, ThresholdFit, ftqc_parameter, is_fault_tolerant, threshold_boundary
from .gate import (
    CPF_SIGNS,
    ErrorBudget,
    GateOutcome,
    TwoQubitState,
    as_two_qubit_state,
    average_errors,
    conditional_fidelity,
    error_budget,
    gate_loss,
    simulate_cpf,
)
from .optimize import (
    CavityScaling,
    CavityScanResult,
    OptimizationResult,
    ScanPoint,
    cavity_scan,
    kappa_ext_loss,
    optimize_kappa_ext,
    scale_by_cavity_length,
)
from .pulses import (
    LONG_PULSE,
    CavityTrajectory,
    PulseSpec,
    SpectralAmplitude,
    SpectralGrid,
    apply_reflection,
    default_grid,
    integrate_time_domain,
    make_gaussian,
    pulse_band_grid,
    spectral_overlap,
    time_domain_view,
)
from .reflection import (
    CqedParams,
    ReflectionPair,
    TotalLossError,
    reflection_coupled,
    reflection_empty,
    reflection_pair,
    steady_conditional_errors,
    steady_gate_conditional,
    steady_gate_loss,
    steady_loss_probs,
)
from .sweep import (
    EXPERIMENTAL_POINTS,
    ErrorMap,
    ExperimentalPoint,
    RequirementReport,
    SweepConfig,
    extract_contour,
    requirement_report,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "CPF_SIGNS",
    "CavityScaling",
    "CavityScanResult",
    "CavityTrajectory",
    "CqedParams",
    "DEFAULT_FIT",
    "ErrorBudget",
    "ErrorMap",
    "EXPERIMENTAL_POINTS",
    "ExperimentalPoint",
    "GateOutcome",
    "LONG_PULSE",
    "OptimizationResult",
    "PulseSpec",
    "ReflectionPair",
    "RequirementReport",
    "ScanPoint",
    "SpectralAmplitude",
    "SpectralGrid",
    "SweepConfig",
    "ThresholdFit",
    "TotalLossError",
    "TwoQubitState",
    "apply_reflection",
    "as_two_qubit_state",
    "average_errors",
    "cavity_scan",
    "conditional_fidelity",
    "default_grid",
    "error_budget",
    "extract_contour",
    "ftqc_parameter",
    "gate_loss",
    "integrate_time_domain",
    "is_fault_tolerant",
    "kappa_ext_loss",
    "make_gaussian",
    "optimize_kappa_ext",
    "pulse_band_grid",
    "reflection_coupled",
    "reflection_empty",
    "reflection_pair",
    "requirement_report",
    "run_sweep",
    "scale_by_cavity_length",
    "simulate_cpf",
    "spectral_overlap",
    "steady_conditional_errors",
    "steady_gate_conditional",
    "steady_gate_loss",
    "steady_loss_probs",
    "threshold_boundary",
    "time_domain_view",
    "__version__",
]
