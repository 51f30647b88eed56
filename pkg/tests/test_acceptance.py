"""Acceptance gate: one test per release criterion, ordered.

Each test prints a one-line quantitative summary (visible with -s) and
asserts the stated tolerance. Criteria with an explicit runtime budget
assert elapsed wall time as well.
"""

import math
import time

import numpy as np
import pytest

from cpfgate import (
    DEFAULT_FIT,
    LONG_PULSE,
    CqedParams,
    PulseSpec,
    SweepConfig,
    apply_reflection,
    average_errors,
    cavity_scan,
    conditional_fidelity,
    default_grid,
    extract_contour,
    ftqc_parameter,
    integrate_time_domain,
    kappa_ext_loss,
    make_gaussian,
    optimize_kappa_ext,
    pulse_band_grid,
    reflection_coupled,
    reflection_empty,
    run_sweep,
    simulate_cpf,
    steady_gate_conditional,
    steady_gate_loss,
    threshold_boundary,
    time_domain_view,
)
from cpfgate.sweep import evaluate_point
from conftest import random_params

REF = CqedParams(10.0, 3.0, 0.1, 1.0)

# unbalanced two-qubit amplitudes with distinct magnitudes and phases
GENERIC = np.array(
    [0.6, 0.2 - 0.55j, -0.35 + 0.1j, 0.25 + 0.3j], dtype=complex
).reshape(2, 2)
GENERIC /= np.linalg.norm(GENERIC)


def generic_errors(params, spec, alpha):
    grid = pulse_band_grid(spec, params)
    pulse = make_gaussian(spec, grid)
    out = simulate_cpf(params, pulse, alpha)
    _, p_c = conditional_fidelity(out, alpha, pulse)
    return out.loss_prob, p_c


def test_01_reflection_closed_forms():
    start = time.monotonic()
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(200):
        g, ke, ki, gam = 10.0 ** rng.uniform(-1, 3, size=4) * (1, 1, 1, 0.01)
        p = CqedParams(g, ke, ki, gam)
        deltas = np.linspace(-30 * (ke + ki), 30 * (ke + ki), 51)
        for refl in (reflection_empty, reflection_coupled):
            worst = max(worst, float(np.max(np.abs(refl(p, deltas)))))
    assert worst <= 1.0 + 1e-12  # passivity

    # critical coupling: resonant reflection of the empty cavity vanishes
    assert reflection_empty(CqedParams(5.0, 2.0, 2.0, 1.0), 0.0) == 0.0

    # lossless single-sided cavity: unit-modulus reflection, -1 on resonance
    lossless = CqedParams(10.0, 3.0, 0.0, 1.0)
    deltas = np.linspace(-40.0, 40.0, 101)
    assert np.max(np.abs(np.abs(reflection_empty(lossless, deltas)) - 1.0)) < 1e-12
    assert reflection_empty(lossless, 0.0) == -1.0
    # coupled atom: resonant reflection (2C - 1)/(2C + 1) -> +1 as C grows
    for g in (10.0, 100.0, 1000.0):
        c = g * g / (2 * 3.0 * 1.0)
        got = reflection_coupled(CqedParams(g, 3.0, 0.0, 1.0), 0.0)
        assert complex(got) == pytest.approx((2 * c - 1) / (2 * c + 1), rel=1e-12)
        assert abs(got - 1.0) < 1.0 / c

    # frozen resonant values for the reference point
    assert complex(reflection_empty(REF, 0.0)) == pytest.approx(-29 / 31, rel=1e-15)
    assert complex(reflection_coupled(REF, 0.0)) == pytest.approx(971 / 1031, rel=1e-15)

    elapsed = time.monotonic() - start
    print(f"\n[1] reflection closed forms: max|L| = {worst:.15f}, {elapsed:.2f}s")
    assert elapsed < 1.0


def test_02_propagation_oracle_equivalence():
    start = time.monotonic()
    param_sets = [
        CqedParams(10.0, 3.0, 0.1, 1.0),
        CqedParams(2.0, 1.0, 0.5, 1.0),
        CqedParams(30.0, 10.0, 1.0, 1.0),
        CqedParams(1.0, 0.3, 0.01, 1.0),
        CqedParams(5.0, 20.0, 2.0, 1.0),
    ]
    worst = 0.0
    for i, params in enumerate(param_sets):
        for j, width in enumerate((0.3, 3.0, 30.0)):
            spec = PulseSpec(width)
            atom_state = (i + j) % 2
            traj = integrate_time_domain(params, spec, atom_state)
            # the output is band-limited to the input band, so ~1200 uniform
            # samples quadrature the L2 distance; denser grids only cost time
            sub = slice(0, traj.times.size, max(1, traj.times.size // 1200))
            times = traj.times[sub]
            refl = apply_reflection(
                make_gaussian(spec, default_grid(spec, params)), params, atom_state
            )
            view = time_domain_view(refl, times)
            dt = times[1] - times[0]
            dist = math.sqrt(float(np.sum(np.abs(view - traj.f_out[sub]) ** 2) * dt))
            worst = max(worst, dist)
    elapsed = time.monotonic() - start
    print(f"\n[2] oracle equivalence: worst L2 = {worst:.3e} (<= 1e-6), {elapsed:.1f}s")
    assert worst <= 1e-6
    assert elapsed < 60.0


def test_03_long_pulse_convergence():
    start = time.monotonic()
    spec = PulseSpec(1e4)
    worst_l = worst_c = 0.0
    for g in np.geomspace(2.0, 200.0, 5):
        for ke in np.geomspace(0.5, 50.0, 5):
            for ki in (0.1, 1.0, 10.0):
                params = CqedParams(g, ke, ki, 1.0)
                p_l, p_c = generic_errors(params, spec, GENERIC)
                worst_l = max(worst_l, abs(p_l - steady_gate_loss(params, GENERIC)))
                worst_c = max(
                    worst_c, abs(p_c - steady_gate_conditional(params, GENERIC))
                )
    elapsed = time.monotonic() - start
    print(
        f"\n[3] long-pulse convergence over 75 points: max |dp_l| = {worst_l:.3e},"
        f" max |dp_c| = {worst_c:.3e} (<= 1e-4), {elapsed:.1f}s"
    )
    assert worst_l <= 1e-4
    assert worst_c <= 1e-4
    assert elapsed < 300.0


def test_04_loss_optimal_coupling_formula():
    start = time.monotonic()
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(25):
        ki = 10.0 ** rng.uniform(-2, 1)
        c_int = 10.0 ** rng.uniform(4, 6)
        g = math.sqrt(2.0 * c_int * ki)
        template = CqedParams(g, 1.0, ki, 1.0)
        res = optimize_kappa_ext(template, LONG_PULSE, objective="loss")
        rel = abs(res.kappa_ext_opt / kappa_ext_loss(template) - 1.0)
        worst = max(worst, rel)
    elapsed = time.monotonic() - start
    print(f"\n[4] loss-optimal coupling: worst |ratio-1| = {worst:.4%} (<= 1%), {elapsed:.1f}s")
    assert worst <= 0.01
    assert elapsed < 120.0


def test_05_error_scaling_exponents():
    c_ints = np.geomspace(1e2, 1e5, 13)
    p_l, p_c = [], []
    for c in c_ints:
        g = math.sqrt(2.0 * c)  # kappa_int = gamma = 1
        template = CqedParams(g, 1.0, 1.0, 1.0)
        params = CqedParams(g, kappa_ext_loss(template), 1.0, 1.0)
        a, b = average_errors(params, LONG_PULSE)
        p_l.append(a)
        p_c.append(b)
    slope_l = np.polyfit(np.log10(c_ints), np.log10(p_l), 1)[0]
    slope_c = np.polyfit(np.log10(c_ints), np.log10(p_c), 1)[0]
    print(f"\n[5] scaling exponents: p_loss {slope_l:+.4f} (-0.5 +- 0.05), "
          f"p_cond {slope_c:+.4f} (-1.0 +- 0.1)")
    assert slope_l == pytest.approx(-0.5, abs=0.05)
    assert slope_c == pytest.approx(-1.0, abs=0.1)


def test_06_long_pulse_cooperativity_threshold():
    start = time.monotonic()
    config = SweepConfig(g_range=(1.0, 1e3, 20), kappa_int_range=(1e-3, 1e3, 20))
    emap = run_sweep(config)
    lines = extract_contour(emap, 1.0)
    assert lines, "no threshold contour found"
    c_vals = np.array([g * g / (2 * ki) for line in lines for g, ki in line])
    elapsed = time.monotonic() - start
    print(f"\n[6] long-pulse threshold contour: C_int in "
          f"[{c_vals.min():.1f}, {c_vals.max():.1f}] (1130 +- 10%), {elapsed:.1f}s")
    assert c_vals.min() >= 1130.0 * 0.9
    assert c_vals.max() <= 1130.0 * 1.1
    assert elapsed < 600.0


def test_07_short_pulse_cooperativity_threshold():
    config = SweepConfig(
        g_range=(50.0, 5e3, 16),
        kappa_int_range=(10.0, 1e3, 12),  # bad-cavity band
        pulse=PulseSpec(0.3),
        kext_policy="minimize-P",
    )
    emap = run_sweep(config, jobs=4)
    assert emap.holes == ()
    lines = extract_contour(emap, 1.0)
    assert lines, "no threshold contour found"
    c_vals = np.array([g * g / (2 * ki) for line in lines for g, ki in line])
    print(f"\n[7] short-pulse threshold contour: C_int in "
          f"[{c_vals.min():.0f}, {c_vals.max():.0f}] (2220 +- 15%)")
    assert c_vals.min() >= 2220.0 * 0.85
    assert c_vals.max() <= 2220.0 * 1.15


def test_08_optimal_coupling_ratio_signs():
    def ratio(g, ki, width):
        template = CqedParams(g, 1.0, ki, 1.0)
        res = optimize_kappa_ext(template, PulseSpec(width), objective="ftqc_P")
        return res.kappa_ext_opt / kappa_ext_loss(template)

    # short pulse, lossy cavities: optimum sits below the loss formula
    short = [ratio(math.sqrt(2 * 2220 * ki), ki, 0.3) for ki in (3.0, 10.0, 100.0, 1e3)]
    # long-ish pulse, low-loss cavities: optimum sits above it
    long_pairs = [(2.0, 0.001), (5.5, 0.01), (10.0, 0.1), (17.0, 0.3)]
    longr = [ratio(g, ki, 30.0) for g, ki in long_pairs]
    print(f"\n[8] coupling ratios: short-pulse {[f'{r:.3f}' for r in short]} (< 1), "
          f"long-pulse {[f'{r:.3f}' for r in longr]} (> 1)")
    assert all(r < 1.0 for r in short)
    assert all(r > 1.0 for r in longr)


def test_09_optimization_benefit_min_g():
    spec = PulseSpec(30.0)

    def min_g(policy):
        lo, hi = 1.0, 100.0
        assert evaluate_point(lo, 1e-3, 1.0, spec, policy, DEFAULT_FIT)[3] > 1.0
        assert evaluate_point(hi, 1e-3, 1.0, spec, policy, DEFAULT_FIT)[3] <= 1.0
        for _ in range(30):
            mid = math.sqrt(lo * hi)
            if evaluate_point(mid, 1e-3, 1.0, spec, policy, DEFAULT_FIT)[3] <= 1.0:
                hi = mid
            else:
                lo = mid
        return hi

    g_formula = min_g("loss-formula")
    g_optimal = min_g("minimize-P")
    print(f"\n[9] min g for P <= 1 at kappa_int = 1e-3: formula {g_formula:.3f}, "
          f"optimized {g_optimal:.3f}, ratio {g_formula / g_optimal:.3f} (> 2)")
    assert g_formula > 2.0 * g_optimal


def test_10_cavity_length_scan():
    start = time.monotonic()
    base = CqedParams(2.0, 1.0, 0.001, 1.0)  # kappa_ext re-optimized per point
    ratios = np.geomspace(1e-3, 10.0, 9)
    res = cavity_scan(base, ratios, PulseSpec(30.0))
    assert res.fit_ok and res.fit is not None
    exponent = res.fit[1]
    by_ratio = {round(math.log10(p.ratio), 9): p.p_ftqc for p in res.points}
    p_small = by_ratio[-2.0]  # ratio 0.01
    p_unit = by_ratio[0.0]  # ratio 1
    elapsed = time.monotonic() - start
    print(f"\n[10] cavity-length scan: exponent {exponent:.3f} (0.51 +- 0.1), "
          f"P(0.01) = {p_small:.3f} (<= 1), P(1) = {p_unit:.3f} (> 1), {elapsed:.1f}s")
    assert exponent == pytest.approx(0.51, abs=0.1)
    assert p_small <= 1.0
    assert p_unit > 1.0
    assert elapsed < 600.0


def test_11_property_suite(rng):
    # probability completeness under a short pulse
    spec = PulseSpec(1.0)
    worst_total = 0.0
    for params in random_params(rng, 15, kappa_int_floor=1e-2):
        pulse = make_gaussian(spec, pulse_band_grid(spec, params))
        for _ in range(4):
            alpha = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            alpha /= np.linalg.norm(alpha)
            out = simulate_cpf(params, pulse, alpha)
            total = sum(out.detect_probs) + out.loss_prob
            worst_total = max(worst_total, abs(total - 1.0))
    assert worst_total <= 1e-9

    # exchange symmetry: equal cross-branch populations leave both error
    # rates invariant under swapping the atoms
    worst_swap = 0.0
    pulse = make_gaussian(spec, pulse_band_grid(spec, REF))
    for _ in range(6):
        alpha = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        alpha[1, 0] = alpha[0, 1] * np.exp(1j * rng.uniform(0, 2 * np.pi))
        alpha /= np.linalg.norm(alpha)
        out_a = simulate_cpf(REF, pulse, alpha)
        out_b = simulate_cpf(REF, pulse, alpha.T.copy())
        _, pc_a = conditional_fidelity(out_a, alpha, pulse)
        _, pc_b = conditional_fidelity(out_b, alpha.T.copy(), pulse)
        worst_swap = max(
            worst_swap, abs(out_a.loss_prob - out_b.loss_prob), abs(pc_a - pc_b)
        )
    assert worst_swap <= 1e-12

    # sweeps are deterministic and parallel-safe
    config = SweepConfig(g_range=(5.0, 100.0, 5), kappa_int_range=(0.1, 10.0, 5))
    maps = [run_sweep(config), run_sweep(config), run_sweep(config, jobs=2)]
    for other in maps[1:]:
        assert np.array_equal(maps[0].p_ftqc, other.p_ftqc)
        assert np.array_equal(maps[0].kappa_ext, other.kappa_ext)

    # threshold curve round-trips through the error parameter
    worst_rt = 0.0
    for p_l in np.geomspace(1e-6, 0.117, 40):
        p_c = threshold_boundary(p_l)
        worst_rt = max(worst_rt, abs(ftqc_parameter(p_l, p_c) - 1.0))
    assert worst_rt <= 1e-12

    print(f"\n[11] properties: completeness {worst_total:.2e}, exchange symmetry "
          f"{worst_swap:.2e}, sweep determinism exact, round-trip {worst_rt:.2e}")
