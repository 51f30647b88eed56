"""Fault-tolerance threshold model: the scalar error parameter
P = a p_l^d + b p_c^d, its boundary curve in the (p_l, p_c) plane, and the
verdict P <= 1. The fit constants are configuration, not physics, so other
threshold models can be swapped in.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ThresholdFit",
    "DEFAULT_FIT",
    "ftqc_parameter",
    "threshold_boundary",
    "is_fault_tolerant",
]


@dataclass(frozen=True)
class ThresholdFit:
    """Coefficients of the threshold curve a p_l^d + b p_c^d = 1."""

    a: float = 60.0 / 17.0
    b: float = 260.0 / 17.0
    d: float = 0.59

    def __post_init__(self) -> None:
        if self.a <= 0 or self.b <= 0:
            raise ValueError("fit coefficients a, b must be positive")
        if not 0 < self.d <= 1:
            raise ValueError(f"fit exponent d must be in (0, 1], got {self.d}")


DEFAULT_FIT = ThresholdFit()


def ftqc_parameter(p_l: float, p_c: float, fit: ThresholdFit = DEFAULT_FIT) -> float:
    """Scalar error parameter P = a p_l^d + b p_c^d."""
    if not 0 <= p_l <= 1 or not 0 <= p_c <= 1:
        raise ValueError("error probabilities must lie in [0, 1]")
    return fit.a * p_l**fit.d + fit.b * p_c**fit.d


def threshold_boundary(p_l: float, fit: ThresholdFit = DEFAULT_FIT) -> float:
    """Largest conditional error still fault-tolerant at the given loss:
    the p_c solving a p_l^d + b p_c^d = 1."""
    if not 0 <= p_l <= 1:
        raise ValueError("loss probability must lie in [0, 1]")
    headroom = 1.0 - fit.a * p_l**fit.d
    if headroom < 0:
        raise ValueError(
            f"loss {p_l:g} alone exceeds the threshold; no boundary exists"
        )
    return (headroom / fit.b) ** (1.0 / fit.d)


def is_fault_tolerant(budget) -> bool:
    """True iff the budget's error parameter satisfies P <= 1 (boundary
    inclusive)."""
    return budget.p_ftqc <= 1.0
