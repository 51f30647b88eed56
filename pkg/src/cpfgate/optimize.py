"""External-coupling-rate optimization and cavity-length scaling.

The closed form kappa_ext_loss balances the two branch reflections
(L0 = -L1) and minimizes the photon loss in the monochromatic limit; the
numeric search handles finite pulses and the combined error parameter P,
whose optimum can sit well away from the loss-optimal point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from .ftqc import DEFAULT_FIT, ThresholdFit, ftqc_parameter
from .gate import average_errors
from .pulses import PulseSpec
from .reflection import CqedParams

__all__ = [
    "OptimizationResult",
    "CavityScaling",
    "ScanPoint",
    "CavityScanResult",
    "kappa_ext_loss",
    "optimize_kappa_ext",
    "scale_by_cavity_length",
    "cavity_scan",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizationResult:
    kappa_ext_opt: float
    objective_value: float
    objective_kind: str
    bracket: tuple[float, float]
    evaluations: int
    unimodal: bool = True


@dataclass(frozen=True)
class CavityScaling:
    """A reference parameter set and a cavity length ratio L_c/L_c0."""

    base_params: CqedParams
    length_ratio: float

    def __post_init__(self) -> None:
        if not self.length_ratio > 0:
            raise ValueError(f"length_ratio must be > 0, got {self.length_ratio}")


def kappa_ext_loss(params: CqedParams) -> float:
    """Loss-optimal external coupling kappa_int * sqrt(1 + 2 C_int).

    Undefined for a lossless cavity (the optimum runs off to infinity).
    """
    if params.kappa_int == 0:
        raise ValueError("kappa_int = 0 has no finite loss-optimal coupling")
    return params.kappa_int * math.sqrt(1.0 + 2.0 * params.c_int)


def _objective_fn(
    template: CqedParams,
    pulse_spec: PulseSpec,
    objective: str,
    fit: ThresholdFit,
):
    if objective == "loss":
        def fun(ke: float) -> float:
            params = CqedParams(template.g, ke, template.kappa_int, template.gamma)
            return average_errors(params, pulse_spec)[0]
    elif objective == "ftqc_P":
        def fun(ke: float) -> float:
            params = CqedParams(template.g, ke, template.kappa_int, template.gamma)
            p_l, p_c = average_errors(params, pulse_spec)
            return ftqc_parameter(p_l, p_c, fit)
    else:
        raise ValueError(f"objective must be 'loss' or 'ftqc_P', got {objective!r}")
    return fun


def _golden_min(fun, lo: float, hi: float, tol: float, seen: list) -> None:
    """Golden-section refinement on log(kappa_ext); appends (x, value) pairs."""
    a, b = math.log(lo), math.log(hi)

    def eval_at(y: float) -> float:
        val = fun(math.exp(y))
        seen.append((math.exp(y), val))
        return val

    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = eval_at(c), eval_at(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = eval_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = eval_at(d)


def optimize_kappa_ext(
    template: CqedParams,
    pulse_spec: PulseSpec,
    objective: str = "loss",
    fit: ThresholdFit = DEFAULT_FIT,
    tol: float = 1e-4,
) -> OptimizationResult:
    """Minimize photon loss or the error parameter P over kappa_ext.

    ``template`` supplies (g, kappa_int, gamma); its kappa_ext is ignored.
    Golden-section search on log(kappa_ext) over a bracket of two decades
    around the loss-optimal closed form, refined to relative width ``tol``.
    The closed-form point itself is always evaluated, so the result never
    loses to it. If the objective is not unimodal in the bracket (an
    endpoint beats the interior), the bracket is widened once; if that still
    fails the best point found is returned flagged as non-unimodal.
    """
    fun = _objective_fn(template, pulse_spec, objective, fit)
    anchor = kappa_ext_loss(template)
    seen: list[tuple[float, float]] = []
    seen.append((anchor, fun(anchor)))

    lo, hi = anchor / 100.0, anchor * 100.0
    unimodal = True
    for attempt in range(2):
        f_lo, f_hi = fun(lo), fun(hi)
        seen.append((lo, f_lo))
        seen.append((hi, f_hi))
        _golden_min(fun, lo, hi, tol, seen)
        interior = [p for p in seen if lo < p[0] < hi]
        best_interior = min(v for _, v in interior)
        if best_interior <= min(f_lo, f_hi):
            break
        if attempt == 0:
            lo, hi = lo / 100.0, hi * 100.0
        else:
            unimodal = False
    best_x, best_val = min(seen, key=lambda p: p[1])
    return OptimizationResult(
        kappa_ext_opt=best_x,
        objective_value=best_val,
        objective_kind=objective,
        bracket=(lo, hi),
        evaluations=len(seen),
        unimodal=unimodal,
    )


def scale_by_cavity_length(scaling: CavityScaling) -> CqedParams:
    """Parameters at a new cavity length: g falls with the square root of
    the length, kappa_int inversely with it, gamma is untouched; the
    internal cooperativity is invariant. kappa_ext is carried over verbatim
    since it is re-optimized downstream anyway."""
    r = scaling.length_ratio
    base = scaling.base_params
    return CqedParams(
        g=base.g / math.sqrt(r),
        kappa_ext=base.kappa_ext,
        kappa_int=base.kappa_int / r,
        gamma=base.gamma,
    )


@dataclass(frozen=True)
class ScanPoint:
    ratio: float
    params: CqedParams
    kappa_ext_opt: float
    p_loss: float
    p_cond: float
    p_ftqc: float


@dataclass(frozen=True)
class CavityScanResult:
    points: tuple[ScanPoint, ...]
    fit: tuple[float, float, float] | None  # P = a * ratio^b + c
    fit_ok: bool


def cavity_scan(
    base: CqedParams,
    ratios,
    pulse_spec: PulseSpec,
    fit: ThresholdFit = DEFAULT_FIT,
) -> CavityScanResult:
    """Scan cavity length ratios, re-optimizing kappa_ext for minimal P at
    each point, and fit the power law P = a * ratio^b + c.

    A failed fit is reported (fit = None) with the raw series intact.
    """
    ratios = [float(r) for r in ratios]
    if len(ratios) < 5:
        raise ValueError("need at least 5 length ratios")
    if min(ratios) <= 0:
        raise ValueError("length ratios must be positive")
    if max(ratios) / min(ratios) < 100.0:
        raise ValueError("length ratios must span at least two decades")

    points = []
    for r in ratios:
        scaled = scale_by_cavity_length(CavityScaling(base, r))
        res = optimize_kappa_ext(scaled, pulse_spec, objective="ftqc_P", fit=fit)
        opt_params = CqedParams(scaled.g, res.kappa_ext_opt, scaled.kappa_int, scaled.gamma)
        p_l, p_c = average_errors(opt_params, pulse_spec)
        points.append(
            ScanPoint(
                ratio=r,
                params=scaled,
                kappa_ext_opt=res.kappa_ext_opt,
                p_loss=p_l,
                p_cond=p_c,
                p_ftqc=ftqc_parameter(p_l, p_c, fit),
            )
        )

    xs = np.array([p.ratio for p in points])
    ys = np.array([p.p_ftqc for p in points])
    p0 = (ys[int(np.argmax(xs))], 0.5, ys[int(np.argmin(xs))])
    try:
        with warnings.catch_warnings():
            # covariance is discarded, so its estimability is irrelevant
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _ = curve_fit(
                lambda x, a, b, c: a * np.power(x, b) + c, xs, ys, p0=p0, maxfev=20000
            )
        fit_params = (float(popt[0]), float(popt[1]), float(popt[2]))
        fit_ok = bool(np.all(np.isfinite(popt)))
    except (RuntimeError, ValueError):
        fit_params, fit_ok = None, False
    return CavityScanResult(points=tuple(points), fit=fit_params, fit_ok=fit_ok)
