"""The full two-atom controlled-phase-flip gate: a photon polarization
interferometer around two sequential cavity reflections, followed by
polarization measurement with feedback on one detector outcome.

A V-polarized photon enters; three wave plates route the H component onto
the cavities. Branch (i, j) means atom 1 in |i> and atom 2 in |j>; the
photon always meets atom 1's cavity first. On a V-click the feedback is a
Pauli-Z on atom 1, after which both detector outcomes implement the same
gate: -1 on the (0, 0) branch, +1 elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ftqc import DEFAULT_FIT, ThresholdFit, ftqc_parameter
from .pulses import (
    PulseSpec,
    SpectralAmplitude,
    SpectralGrid,
    make_gaussian,
    pulse_band_grid,
)
from .reflection import (
    CqedParams,
    TotalLossError,
    reflection_coupled,
    reflection_empty,
)

__all__ = [
    "TwoQubitState",
    "GateOutcome",
    "ErrorBudget",
    "CPF_SIGNS",
    "simulate_cpf",
    "gate_loss",
    "conditional_fidelity",
    "average_errors",
    "error_budget",
]

# ideal phase pattern on branches (i, j)
CPF_SIGNS = np.array([[-1.0, 1.0], [1.0, 1.0]])

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class TwoQubitState:
    """Coefficients alpha[i, j] of the two-atom input state."""

    alpha: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.alpha, dtype=complex).reshape(2, 2)
        total = float(np.sum(np.abs(a) ** 2))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: sum of |alpha|^2 = {total!r}")
        a.flags.writeable = False
        object.__setattr__(self, "alpha", a)

    @classmethod
    def uniform(cls) -> "TwoQubitState":
        """The maximally entangling test state with all |alpha_ij| = 1/2."""
        return cls(np.full((2, 2), 0.5))

    @classmethod
    def basis(cls, i: int, j: int) -> "TwoQubitState":
        a = np.zeros((2, 2))
        a[i, j] = 1.0
        return cls(a)


def as_two_qubit_state(state) -> TwoQubitState:
    if isinstance(state, TwoQubitState):
        return state
    return TwoQubitState(np.asarray(state, dtype=complex))


@dataclass(frozen=True)
class GateOutcome:
    """Per-branch, per-detector output spectra of one gate run.

    branch_values[i, j, k] is the spectrum of branch (i, j) conditioned on
    detector outcome k (0 = H-click, 1 = V-click), with the input state
    coefficient alpha_ij and the V-click feedback already folded in.
    """

    grid: SpectralGrid
    branch_values: np.ndarray
    detect_probs: tuple[float, float]
    loss_prob: float

    def branch_spectrum(self, i: int, j: int, outcome) -> SpectralAmplitude:
        k = {"H": 0, "V": 1, 0: 0, 1: 1}[outcome]
        return SpectralAmplitude(self.grid, self.branch_values[i, j, k])

    @property
    def detect_total(self) -> float:
        return self.detect_probs[0] + self.detect_probs[1]


@dataclass(frozen=True)
class ErrorBudget:
    """State-averaged gate errors with the fault-tolerance verdict."""

    p_loss_avg: float
    p_cond_avg: float
    p_ftqc: float
    fault_tolerant: bool


def _branch_transfers(
    params: CqedParams, deltas: np.ndarray, params2: CqedParams | None
) -> np.ndarray:
    """Transfer amplitude T[i, j, k](Delta) of each branch onto each
    detector (k = 0 H-click, 1 V-click), V-click feedback included."""
    second = params if params2 is None else params2
    refl_1 = (reflection_empty(params, deltas), reflection_coupled(params, deltas))
    refl_2 = (reflection_empty(second, deltas), reflection_coupled(second, deltas))
    transfers = np.empty((2, 2, 2, len(deltas)), dtype=complex)
    for i in range(2):
        for j in range(2):
            v = np.ones_like(deltas, dtype=complex)
            h = np.zeros_like(v)
            v, h = _SQRT_HALF * (v + h), _SQRT_HALF * (v - h)  # wave plate
            h = h * refl_1[i]  # first cavity acts on H only
            v, h = _SQRT_HALF * (v + h), _SQRT_HALF * (v - h)
            h = h * refl_2[j]
            # final plate maps straight onto the detector basis
            h_click, v_click = _SQRT_HALF * (v + h), _SQRT_HALF * (h - v)
            if i == 1:
                v_click = -v_click  # feedback: Z on atom 1 after a V-click
            transfers[i, j, 0] = h_click
            transfers[i, j, 1] = v_click
    return transfers


def simulate_cpf(
    params: CqedParams,
    pulse: SpectralAmplitude,
    state,
    params2: CqedParams | None = None,
) -> GateOutcome:
    """Run the gate on one input pulse and state.

    Both atoms share ``params`` unless a second parameter set is given for
    atom 2's cavity (the photon still meets atom 1 first).
    """
    state = as_two_qubit_state(state)
    norm_in = pulse.norm_sq()
    if abs(norm_in - 1.0) > 1e-6:
        raise ValueError(f"input pulse not normalized: |f|^2 integrates to {norm_in!r}")
    transfers = _branch_transfers(params, pulse.grid.deltas, params2)
    branch_values = transfers * (state.alpha[:, :, None, None] * pulse.values)
    weights = (
        np.sum(np.abs(branch_values) ** 2, axis=3) * pulse.grid.spacing / norm_in
    )
    p_h = float(weights[:, :, 0].sum())
    p_v = float(weights[:, :, 1].sum())
    return GateOutcome(
        grid=pulse.grid,
        branch_values=branch_values,
        detect_probs=(p_h, p_v),
        loss_prob=max(0.0, 1.0 - p_h - p_v),
    )


def gate_loss(outcome: GateOutcome) -> float:
    """Probability that the photon was absorbed rather than detected."""
    return outcome.loss_prob


def conditional_fidelity(
    outcome: GateOutcome, state, ideal_pulse: SpectralAmplitude
) -> tuple[float, float]:
    """Fidelity with the ideal gate output, renormalized on the detected
    (non-lost) part of the state; returns (F, p_c = 1 - F).

    The ideal branch amplitude is sign_ij * alpha_ij * ideal_pulse, with the
    -1 sign on the (0, 0) branch. With perfect reflections the circuit sends
    the photon into an even superposition of the two detector ports, so the
    reference state splits the ideal pulse evenly between the outcomes and
    the overlap sums coherently across them:

        F = |o_H + o_V|^2 / (2 (p_H + p_V)),   o_k = sum_ij <ideal_ij|branch_ijk>
    """
    state = as_two_qubit_state(state)
    if ideal_pulse.grid != outcome.grid:
        raise ValueError("ideal pulse grid differs from the outcome grid")
    spacing = outcome.grid.spacing
    ideal = (CPF_SIGNS * state.alpha)[:, :, None] * ideal_pulse.values
    overlaps = (
        np.sum(np.conj(ideal)[:, :, None, :] * outcome.branch_values, axis=(0, 1, 3))
        * spacing
    )
    powers = np.sum(np.abs(outcome.branch_values) ** 2, axis=(0, 1, 3)) * spacing
    total = float(powers.sum())
    if total <= 0.0:
        raise TotalLossError("no detection probability left to condition on")
    fidelity = min(1.0, float(np.abs(overlaps.sum()) ** 2) / (2.0 * total))
    return fidelity, max(0.0, 1.0 - fidelity)


def average_errors(
    params: CqedParams,
    pulse_spec: PulseSpec,
    params2: CqedParams | None = None,
    grid: SpectralGrid | None = None,
) -> tuple[float, float]:
    """State-averaged loss and conditional error for one parameter point.

    The loss average is exact with uniform branch weights because loss is
    linear in the branch populations. The conditional average comes from the
    entanglement fidelity of the branch-diagonal channel, realized by the
    uniform-amplitude state, converted with p_c = 1 - (4 F + 1)/5.
    """
    if grid is None:
        grid = pulse_band_grid(pulse_spec, params)
        if params2 is not None:
            other = pulse_band_grid(pulse_spec, params2)
            if other.n_points > grid.n_points:
                grid = other
    pulse = make_gaussian(pulse_spec, grid)
    state = TwoQubitState.uniform()
    outcome = simulate_cpf(params, pulse, state, params2)
    fidelity, _ = conditional_fidelity(outcome, state, pulse)
    p_cond = 1.0 - (4.0 * fidelity + 1.0) / 5.0
    return outcome.loss_prob, float(min(1.0, max(0.0, p_cond)))


def error_budget(
    params: CqedParams,
    pulse_spec: PulseSpec,
    fit: ThresholdFit = DEFAULT_FIT,
    params2: CqedParams | None = None,
) -> ErrorBudget:
    """Average errors plus the fault-tolerance error parameter and verdict."""
    p_l, p_c = average_errors(params, pulse_spec, params2)
    p = ftqc_parameter(p_l, p_c, fit)
    return ErrorBudget(p_l, p_c, p, p <= 1.0)
