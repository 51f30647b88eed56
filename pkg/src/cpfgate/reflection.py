"""Single-frequency cavity reflection amplitudes and their closed-form error
probabilities in the monochromatic (long-pulse) limit.

All rates are measured in units of the atomic polarization decay ``gamma``
unless an explicit ``gamma`` is carried by the parameter set. Everything in
this module is an exact closed form evaluated at a single detuning, which
lets these functions double as oracles for the pulse-resolved machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CqedParams",
    "ReflectionPair",
    "TotalLossError",
    "reflection_empty",
    "reflection_coupled",
    "reflection_pair",
    "steady_loss_probs",
    "steady_conditional_errors",
    "steady_gate_loss",
    "steady_gate_conditional",
]


class TotalLossError(ValueError):
    """Every branch of the state was fully absorbed; renormalizing the
    surviving component is undefined, which is a distinct condition from a
    100% error probability."""


@dataclass(frozen=True)
class CqedParams:
    """Rate set of one single-sided cavity holding one atom.

    g
        Atom-cavity coupling rate. ``g = 0`` is accepted and reduces every
        formula to the empty-cavity case.
    kappa_ext
        Cavity field decay through the coupling mirror (the useful port).
    kappa_int
        Cavity field decay into undesired internal channels.
    gamma
        Atomic polarization decay rate; the unit all other rates are
        naturally compared against.
    """

    g: float
    kappa_ext: float
    kappa_int: float
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if self.g < 0:
            raise ValueError(f"coupling g must be >= 0, got {self.g}")
        if self.kappa_ext <= 0:
            raise ValueError(f"kappa_ext must be > 0, got {self.kappa_ext}")
        if self.kappa_int < 0:
            raise ValueError(f"kappa_int must be >= 0, got {self.kappa_int}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")

    @property
    def kappa(self) -> float:
        """Total cavity field decay rate."""
        return self.kappa_ext + self.kappa_int

    @property
    def c_int(self) -> float:
        """Internal cooperativity g^2/(2 kappa_int gamma); infinite for a
        lossless cavity."""
        if self.kappa_int == 0:
            return math.inf
        return self.g * self.g / (2.0 * self.kappa_int * self.gamma)

    def normalized(self) -> "CqedParams":
        """The same physics rescaled so that gamma = 1."""
        s = self.gamma
        return CqedParams(self.g / s, self.kappa_ext / s, self.kappa_int / s, 1.0)


@dataclass(frozen=True)
class ReflectionPair:
    """Reflection amplitudes for both atomic qubit states at one detuning."""

    l0: complex
    l1: complex
    detuning: float


def reflection_empty(params: CqedParams, delta):
    """Reflection amplitude with the atom in |0> (cavity decoupled).

    ``delta`` may be a scalar or an array of detunings. The denominator
    cannot vanish because kappa_ext > 0.
    """
    ke, ki = params.kappa_ext, params.kappa_int
    d = np.asarray(delta, dtype=float)
    out = ((ki - ke) - 1j * d) / ((ki + ke) - 1j * d)
    return out.item() if out.ndim == 0 else out


def reflection_coupled(params: CqedParams, delta):
    """Reflection amplitude with the atom in |1> (cavity coupled).

    The atomic response g^2/(gamma - i delta) stiffens the cavity and pushes
    the amplitude toward +1 in the strong-coupling limit.
    """
    g, ke, ki, gamma = params.g, params.kappa_ext, params.kappa_int, params.gamma
    d = np.asarray(delta, dtype=float)
    s = g * g / (gamma - 1j * d)
    out = ((ki - ke) - 1j * d + s) / ((ki + ke) - 1j * d + s)
    return out.item() if out.ndim == 0 else out


def reflection_pair(params: CqedParams, delta: float) -> ReflectionPair:
    """Both reflection amplitudes at a single detuning."""
    return ReflectionPair(
        l0=reflection_empty(params, delta),
        l1=reflection_coupled(params, delta),
        detuning=float(delta),
    )


def _resonant(params: CqedParams) -> tuple[float, float]:
    # at delta = 0 both amplitudes are exactly real
    return (
        reflection_empty(params, 0.0).real,
        reflection_coupled(params, 0.0).real,
    )


def steady_loss_probs(params: CqedParams) -> tuple[float, float]:
    """Photon loss probabilities (atom in |0>, atom in |1>) for a
    monochromatic resonant photon: 1 - |L|^2 for each branch.

    The |0> loss peaks at 1 when kappa_ext = kappa_int; the |1> loss peaks
    when kappa_ext = kappa_int + g^2/gamma.
    """
    l0, l1 = _resonant(params)
    return max(0.0, 1.0 - l0 * l0), max(0.0, 1.0 - l1 * l1)


def steady_conditional_errors(params: CqedParams) -> tuple[float, float]:
    """Conditional (detected-photon) error probabilities per atomic branch
    for a monochromatic resonant photon.

    The |0> branch should flip the photon's phase, so its error vanishes at
    L0 = -1; the |1> branch should leave it unchanged, vanishing at L1 = +1.
    """
    l0, l1 = _resonant(params)
    p_c0 = 1.0 - 0.5 * (1.0 - l0) ** 2 / (1.0 + l0 * l0)
    p_c1 = 1.0 - 0.5 * (1.0 + l1) ** 2 / (1.0 + l1 * l1)
    return max(0.0, p_c0), max(0.0, p_c1)


def _branch_probs(state) -> np.ndarray:
    """Branch populations |alpha_ij|^2 flattened as (00, 01, 10, 11)."""
    alpha = np.asarray(getattr(state, "alpha", state), dtype=complex).reshape(-1)
    if alpha.shape != (4,):
        raise ValueError("state must provide four amplitudes (a00, a01, a10, a11)")
    probs = np.abs(alpha) ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"state not normalized: sum of |alpha|^2 = {total!r}")
    return probs


def _branch_survivals(l0: float, l1: float) -> np.ndarray:
    """Photon survival probability of each branch (00, 01, 10, 11).

    The photon meets atom 1's cavity first; branch (i, j) survives with
    [|1 + L_i|^2 + |L_j|^2 |1 - L_i|^2] / 4.
    """
    def surv(li: float, lj: float) -> float:
        return ((1.0 + li) ** 2 + lj * lj * (1.0 - li) ** 2) / 4.0

    return np.array([surv(l0, l0), surv(l0, l1), surv(l1, l0), surv(l1, l1)])


def steady_gate_loss(params: CqedParams, state) -> float:
    """Photon loss probability of the full two-atom gate in the
    monochromatic limit, for an arbitrary normalized input state."""
    probs = _branch_probs(state)
    l0, l1 = _resonant(params)
    return float(min(1.0, max(0.0, 1.0 - probs @ _branch_survivals(l0, l1))))


def steady_gate_conditional(params: CqedParams, state) -> float:
    """Conditional error probability of the full two-atom gate in the
    monochromatic limit: one minus the renormalized overlap with the ideal
    phase-flipped state.

    Raises TotalLossError if every branch is fully absorbed (renormalization
    undefined); unreachable for valid parameters but checked defensively.
    """
    probs = _branch_probs(state)
    l0, l1 = _resonant(params)
    # overlap of each surviving branch with its ideal target, halved
    overlap = (
        probs[0] * l0 * (l0 - 1.0)
        - probs[1] * l1 * (l0 - 1.0)
        + (probs[2] + probs[3]) * (l1 + 1.0)
    )
    denom = float(probs @ _branch_survivals(l0, l1))
    if denom <= 0.0:
        raise TotalLossError("all branches fully absorbed; no photon to condition on")
    fidelity = 0.25 * overlap * overlap / denom
    return float(min(1.0, max(0.0, 1.0 - fidelity)))
