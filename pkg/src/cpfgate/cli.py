"""Command-line front end: reproducible, config-file-driven runs of every
computation in the package.

Resolution order for every parameter: explicit flag, then environment
variable (prefix CPFGATE_, upper-cased flag name), then config file (JSON,
flat keys matching flag names; threshold fit also accepts dotted
``threshold.a`` style keys), then built-in default. Every output embeds the
fully resolved configuration and a sha256 over its data section, so a saved
config reruns to byte-identical data.

Exit codes: 0 success, 1 compute failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .ftqc import ThresholdFit, ftqc_parameter, threshold_boundary
from .gate import TwoQubitState, error_budget, simulate_cpf
from .optimize import cavity_scan, kappa_ext_loss, optimize_kappa_ext
from .pulses import (
    PulseSpec,
    apply_reflection,
    default_grid,
    integrate_time_domain,
    make_gaussian,
    time_domain_view,
)
from .reflection import CqedParams, steady_loss_probs
from .sweep import SweepConfig, extract_contour, requirement_report, run_sweep

__all__ = ["main", "build_parser"]

DEFAULTS = {
    "g": 10.0,
    "kappa_int": 0.1,
    "kappa_ext": None,  # None means: use the loss-optimal closed form
    "gamma": 1.0,
    "pulse_width": 1.0,
    "long_pulse": False,
    "atom_state": 1,
    "objective": "ftqc_P",
    "out": ".",
    "jobs": None,
    "threshold_a": 60.0 / 17.0,
    "threshold_b": 260.0 / 17.0,
    "threshold_d": 0.59,
    "g_min": 1.0,
    "g_max": 1e3,
    "g_points": 40,
    "kappa_int_min": 1e-3,
    "kappa_int_max": 1e3,
    "kappa_int_points": 40,
    "policy": "loss-formula",
    "contour_level": None,
    "report": False,
    "ratio_min": 1e-3,
    "ratio_max": 10.0,
    "ratio_points": 9,
    "p_loss": None,
    "p_cond": None,
}

_CASTS = {
    "atom_state": int,
    "jobs": int,
    "g_points": int,
    "kappa_int_points": int,
    "ratio_points": int,
    "long_pulse": bool,
    "report": bool,
    "objective": str,
    "policy": str,
    "out": str,
}

# effectively monochromatic stand-in for commands that must integrate in time
_LONG_PULSE_WIDTH_TIME_DOMAIN = 1e4


def _cast_env(dest: str, raw: str):
    cast = _CASTS.get(dest, float)
    if cast is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _config_lookup(config: dict, dest: str):
    if dest in config:
        return config[dest]
    if dest.startswith("threshold_"):
        dotted = "threshold." + dest.split("_", 1)[1]
        if dotted in config:
            return config[dotted]
        nested = config.get("threshold")
        if isinstance(nested, dict):
            return nested.get(dest.split("_", 1)[1])
    return None


class Resolved(dict):
    """Fully resolved run configuration; attribute access for brevity."""

    def __getattr__(self, name):
        try:
            return self[name]
        except KeyError as exc:
            raise AttributeError(name) from exc


def _resolve(args: argparse.Namespace, dests: list[str]) -> Resolved:
    config_file = {}
    if getattr(args, "config", None):
        config_file = json.loads(Path(args.config).read_text())
    out = Resolved()
    for dest in dests:
        value = getattr(args, dest, None)
        if value is None:
            env = os.environ.get("CPFGATE_" + dest.upper())
            if env is not None:
                value = _cast_env(dest, env)
        if value is None:
            value = _config_lookup(config_file, dest)
        if value is None:
            value = DEFAULTS[dest]
        out[dest] = value
    return out


def _params_from(cfg: Resolved) -> CqedParams:
    ke = cfg.kappa_ext
    if ke is None:
        ke = kappa_ext_loss(CqedParams(cfg.g, 1.0, cfg.kappa_int, cfg.gamma))
        cfg["kappa_ext"] = ke  # embed the resolved value
    return CqedParams(cfg.g, ke, cfg.kappa_int, cfg.gamma)


def _pulse_from(cfg: Resolved, time_domain: bool = False) -> PulseSpec:
    if cfg.long_pulse:
        width = _LONG_PULSE_WIDTH_TIME_DOMAIN if time_domain else math.inf
        cfg["pulse_width"] = width
        cfg["long_pulse"] = False if time_domain else True
    else:
        width = cfg.pulse_width
    return PulseSpec(width)


def _fit_from(cfg: Resolved) -> ThresholdFit:
    return ThresholdFit(cfg.threshold_a, cfg.threshold_b, cfg.threshold_d)


def _fmt(x) -> str:
    return f"{x:.17g}"


def _data_hash(data) -> str:
    payload = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _write_json(path: Path, cfg: Resolved, data: dict) -> None:
    doc = {"config": dict(cfg), "data": data, "data_sha256": _data_hash(data)}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    text = "\n".join(lines) + "\n"
    path.write_text(text)
    return hashlib.sha256(text.encode()).hexdigest()


def _outdir(cfg: Resolved) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_reflect(cfg: Resolved) -> int:
    params = _params_from(cfg)
    pulse_spec = _pulse_from(cfg, time_domain=True)
    atom_state = int(cfg.atom_state)
    if atom_state not in (0, 1):
        raise ValueError(f"atom-state must be 0 or 1, got {atom_state}")

    traj = integrate_time_domain(params, pulse_spec, atom_state)
    grid = default_grid(pulse_spec, params)
    spectrum_in = make_gaussian(pulse_spec, grid)
    spectrum_out = apply_reflection(spectrum_in, params, atom_state)
    spectral_loss = spectrum_in.norm_sq() - spectrum_out.norm_sq()

    ideal_sign = -1.0 if atom_state == 0 else 1.0
    dt = traj.times[1] - traj.times[0]
    distance = math.sqrt(
        float(np.sum(np.abs(traj.f_out - ideal_sign * traj.f_in) ** 2) * dt)
    )

    out = _outdir(cfg)
    rows_in = zip(traj.times, traj.f_in, np.zeros_like(traj.times))
    hash_in = _write_csv(out / "pulse_in.csv", ["t", "re", "im"], rows_in)
    rows_out = zip(traj.times, traj.f_out.real, traj.f_out.imag)
    hash_out = _write_csv(out / "pulse_out.csv", ["t", "re", "im"], rows_out)

    steady = steady_loss_probs(params)
    data = {
        "atom_state": atom_state,
        "loss_time_domain": traj.dissipated_norm,
        "loss_spectral": spectral_loss,
        "loss_monochromatic": steady[atom_state],
        "l2_distance_to_ideal": distance,
        "pulse_in_sha256": hash_in,
        "pulse_out_sha256": hash_out,
    }
    _write_json(out / "reflect_summary.json", cfg, data)
    print(f"loss = {_fmt(traj.dissipated_norm)}")
    print(f"l2_distance_to_ideal = {_fmt(distance)}")
    return 0


def cmd_gate(cfg: Resolved) -> int:
    params = _params_from(cfg)
    pulse_spec = _pulse_from(cfg)
    fit = _fit_from(cfg)
    budget = error_budget(params, pulse_spec, fit)

    from .pulses import pulse_band_grid

    grid = pulse_band_grid(pulse_spec, params)
    pulse = make_gaussian(pulse_spec, grid)
    state = TwoQubitState.uniform()
    outcome = simulate_cpf(params, pulse, state)

    data = {
        "params": {
            "g": params.g,
            "kappa_ext": params.kappa_ext,
            "kappa_int": params.kappa_int,
            "gamma": params.gamma,
        },
        "pulse_spec": {"width": pulse_spec.width, "center": pulse_spec.t0},
        "p_loss": budget.p_loss_avg,
        "p_cond": budget.p_cond_avg,
        "p_ftqc": budget.p_ftqc,
        "fault_tolerant": budget.fault_tolerant,
        "detect_probs": {
            "H": outcome.detect_probs[0],
            "V": outcome.detect_probs[1],
        },
    }
    _write_json(_outdir(cfg) / "gate.json", cfg, data)
    print(f"p_loss = {_fmt(budget.p_loss_avg)}")
    print(f"p_cond = {_fmt(budget.p_cond_avg)}")
    print(f"P = {_fmt(budget.p_ftqc)} fault_tolerant = {budget.fault_tolerant}")
    return 0


def cmd_optimize(cfg: Resolved) -> int:
    template = _params_from(cfg)
    pulse_spec = _pulse_from(cfg)
    fit = _fit_from(cfg)
    result = optimize_kappa_ext(template, pulse_spec, cfg.objective, fit)
    anchor = kappa_ext_loss(template)
    ratio = result.kappa_ext_opt / anchor
    data = {
        "objective": result.objective_kind,
        "kappa_ext_opt": result.kappa_ext_opt,
        "objective_value": result.objective_value,
        "kappa_ext_loss": anchor,
        "ratio_to_loss_formula": ratio,
        "bracket": list(result.bracket),
        "evaluations": result.evaluations,
        "unimodal": result.unimodal,
    }
    _write_json(_outdir(cfg) / "optimize.json", cfg, data)
    print(f"kappa_ext_opt = {_fmt(result.kappa_ext_opt)}")
    print(f"kappa_ext_loss = {_fmt(anchor)}")
    print(f"ratio = {_fmt(ratio)}")
    return 0


def cmd_sweep(cfg: Resolved) -> int:
    config = SweepConfig(
        g_range=(cfg.g_min, cfg.g_max, int(cfg.g_points)),
        kappa_int_range=(cfg.kappa_int_min, cfg.kappa_int_max, int(cfg.kappa_int_points)),
        pulse=_pulse_from(cfg),
        kext_policy=cfg.policy,
        threshold_fit=_fit_from(cfg),
        gamma=cfg.gamma,
    )
    jobs = cfg.jobs if cfg.jobs is not None else (os.cpu_count() or 1)
    emap = run_sweep(config, jobs=int(jobs))

    out = _outdir(cfg)
    rows = (
        (g, ki, emap.kappa_ext[i, j], emap.p_loss[i, j], emap.p_cond[i, j], emap.p_ftqc[i, j])
        for i, g in enumerate(emap.g_values)
        for j, ki in enumerate(emap.kappa_int_values)
    )
    csv_hash = _write_csv(
        out / "sweep.csv",
        ["g", "kappa_int", "kappa_ext", "p_loss", "p_cond", "P"],
        rows,
    )
    data = {
        "map_sha256": csv_hash,
        "holes": [list(h[:2]) for h in emap.holes],
        "grid": {
            "g": [_fmt(g) for g in emap.g_values],
            "kappa_int": [_fmt(k) for k in emap.kappa_int_values],
        },
    }
    _write_json(out / "sweep.meta.json", cfg, data)

    if cfg.contour_level is not None:
        level = float(cfg.contour_level)
        rows = []
        for idx, line in enumerate(extract_contour(emap, level)):
            rows.extend((idx, g, ki) for g, ki in line)
        _write_csv(out / "contour.csv", ["polyline", "g", "kappa_int"], rows)
    if cfg.report:
        rep = requirement_report(emap)
        data = {
            "kappa_int": list(map(float, rep.kappa_int)),
            "min_g": [None if math.isnan(v) else float(v) for v in rep.min_g],
            "experimental": [
                {
                    "g": p.g,
                    "kappa_int": p.kappa_int,
                    "P": p.p_ftqc,
                    "fault_tolerant": p.fault_tolerant,
                }
                for p in rep.experimental
            ],
        }
        _write_json(out / "requirements.json", cfg, data)
    print(f"sweep complete: {emap.p_ftqc.size} points, {len(emap.holes)} holes")
    return 0


def cmd_cavity_scan(cfg: Resolved) -> int:
    base = _params_from(cfg)
    pulse_spec = _pulse_from(cfg)
    fit = _fit_from(cfg)
    ratios = np.geomspace(cfg.ratio_min, cfg.ratio_max, int(cfg.ratio_points))
    result = cavity_scan(base, ratios, pulse_spec, fit)

    out = _outdir(cfg)
    rows = (
        (p.ratio, p.params.g, p.params.kappa_int, p.kappa_ext_opt, p.p_loss, p.p_cond, p.p_ftqc)
        for p in result.points
    )
    csv_hash = _write_csv(
        out / "cavity_scan.csv",
        ["ratio", "g", "kappa_int", "kappa_ext_opt", "p_loss", "p_cond", "P"],
        rows,
    )
    data = {
        "scan_sha256": csv_hash,
        "fit_ok": result.fit_ok,
        "fit": None if result.fit is None else {
            "a": result.fit[0], "b": result.fit[1], "c": result.fit[2],
        },
    }
    _write_json(out / "cavity_fit.json", cfg, data)
    if result.fit is not None:
        a, b, c = result.fit
        print(f"P = {_fmt(a)} * ratio^{_fmt(b)} + {_fmt(c)}")
    else:
        print("fit failed; raw series written")
    return 0


def cmd_threshold(cfg: Resolved) -> int:
    fit = _fit_from(cfg)
    if cfg.p_loss is None:
        raise ValueError("--p-loss is required")
    p_l = float(cfg.p_loss)
    boundary = threshold_boundary(p_l, fit)
    data = {"p_loss": p_l, "p_cond_threshold": boundary}
    print(f"p_cond_threshold = {_fmt(boundary)}")
    if cfg.p_cond is not None:
        p = ftqc_parameter(p_l, float(cfg.p_cond), fit)
        data["p_cond"] = float(cfg.p_cond)
        data["P"] = p
        data["fault_tolerant"] = p <= 1.0
        print(f"P = {_fmt(p)} fault_tolerant = {p <= 1.0}")
    if cfg.out != ".":
        _write_json(_outdir(cfg) / "threshold.json", cfg, data)
    return 0


def _add_common(sp: argparse.ArgumentParser, *physics: str) -> list[str]:
    sp.add_argument("--config", help="JSON config file; flags override its keys")
    sp.add_argument("--out", help="output directory (default: current)")
    dests = ["out"]
    flags = {
        "g": ("--g", float, "atom-cavity coupling g (units of gamma)"),
        "kappa_ext": ("--kappa-ext", float, "external coupling rate; defaults to the loss-optimal value"),
        "kappa_int": ("--kappa-int", float, "internal loss rate"),
        "gamma": ("--gamma", float, "atomic polarization decay rate"),
        "pulse_width": ("--pulse-width", float, "temporal 1/e half-width W_t (units of 1/gamma)"),
        "jobs": ("--jobs", int, "parallel worker processes"),
        "objective": ("--objective", str, "optimization target: loss or ftqc_P"),
        "atom_state": ("--atom-state", int, "atomic qubit state, 0 or 1"),
    }
    for dest in physics:
        flag, typ, help_text = flags[dest]
        sp.add_argument(flag, dest=dest, type=typ, help=help_text)
        dests.append(dest)
    if "pulse_width" in physics:
        sp.add_argument(
            "--long-pulse",
            dest="long_pulse",
            action="store_const",
            const=True,
            help="monochromatic limit instead of a finite pulse width",
        )
        dests.append("long_pulse")
    for dest, flag in (
        ("threshold_a", "--threshold-a"),
        ("threshold_b", "--threshold-b"),
        ("threshold_d", "--threshold-d"),
    ):
        sp.add_argument(flag, dest=dest, type=float, help=argparse.SUPPRESS)
        dests.append(dest)
    return dests


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpfgate",
        description="Photon-mediated controlled-phase-flip gate: simulation, "
        "error budgets, coupling optimization, and parameter sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("reflect", help="propagate one pulse off one cavity")
    sp.set_defaults(fn=cmd_reflect, dests=_add_common(
        sp, "g", "kappa_ext", "kappa_int", "gamma", "pulse_width", "atom_state"
    ))

    sp = sub.add_parser("gate", help="full gate run: loss, conditional error, P")
    sp.set_defaults(fn=cmd_gate, dests=_add_common(
        sp, "g", "kappa_ext", "kappa_int", "gamma", "pulse_width"
    ))

    sp = sub.add_parser("optimize", help="optimal external coupling at one point")
    sp.set_defaults(fn=cmd_optimize, dests=_add_common(
        sp, "g", "kappa_int", "gamma", "pulse_width", "objective"
    ) + ["kappa_ext"])

    sp = sub.add_parser("sweep", help="error maps over the (g, kappa_int) plane")
    dests = _add_common(sp, "gamma", "pulse_width", "jobs")
    sp.add_argument("--g-min", dest="g_min", type=float)
    sp.add_argument("--g-max", dest="g_max", type=float)
    sp.add_argument("--g-points", dest="g_points", type=int)
    sp.add_argument("--kappa-int-min", dest="kappa_int_min", type=float)
    sp.add_argument("--kappa-int-max", dest="kappa_int_max", type=float)
    sp.add_argument("--kappa-int-points", dest="kappa_int_points", type=int)
    sp.add_argument("--policy", dest="policy", choices=["loss-formula", "minimize-P"])
    sp.add_argument("--contour-level", dest="contour_level", type=float,
                    help="also extract this level contour of P")
    sp.add_argument("--report", dest="report", action="store_const", const=True,
                    help="also write the minimum-coupling requirement report")
    sp.set_defaults(fn=cmd_sweep, dests=dests + [
        "g_min", "g_max", "g_points",
        "kappa_int_min", "kappa_int_max", "kappa_int_points",
        "policy", "contour_level", "report",
    ])

    sp = sub.add_parser("cavity-scan", help="scaling scan over cavity length ratios")
    dests = _add_common(sp, "g", "kappa_int", "gamma", "pulse_width")
    sp.add_argument("--ratio-min", dest="ratio_min", type=float)
    sp.add_argument("--ratio-max", dest="ratio_max", type=float)
    sp.add_argument("--ratio-points", dest="ratio_points", type=int)
    sp.set_defaults(fn=cmd_cavity_scan, dests=dests + [
        "ratio_min", "ratio_max", "ratio_points", "kappa_ext",
    ])

    sp = sub.add_parser("threshold", help="fault-tolerance boundary arithmetic")
    sp.add_argument("--p-loss", dest="p_loss", type=float, help="loss probability")
    sp.add_argument("--p-cond", dest="p_cond", type=float, help="conditional error")
    sp.set_defaults(fn=cmd_threshold, dests=_add_common(sp) + ["p_loss", "p_cond"])

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args, args.dests)
        return args.fn(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # compute failure
        print(f"failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
