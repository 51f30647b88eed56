"""Coupling-rate optimization: closed form, numeric search, cavity scaling."""

import math

import numpy as np
import pytest

from cpfgate import (
    LONG_PULSE,
    CavityScaling,
    CqedParams,
    PulseSpec,
    average_errors,
    cavity_scan,
    ftqc_parameter,
    kappa_ext_loss,
    optimize_kappa_ext,
    scale_by_cavity_length,
)

KAPPA_LOSS_REF = 3.1638584039112749  # g=10, kappa_int=0.1, gamma=1


def test_closed_form_reference_value():
    assert kappa_ext_loss(CqedParams(10.0, 1.0, 0.1, 1.0)) == pytest.approx(
        KAPPA_LOSS_REF, rel=1e-15
    )


def test_closed_form_small_cooperativity():
    assert kappa_ext_loss(CqedParams(0.0, 1.0, 0.7, 1.0)) == pytest.approx(0.7)
    # C_int = 4 -> sqrt(9) = 3
    p = CqedParams(2.0, 1.0, 0.5, 1.0)
    assert p.c_int == pytest.approx(4.0)
    assert kappa_ext_loss(p) == pytest.approx(1.5)


def test_closed_form_strong_coupling_asymptote():
    for c in (1e2, 1e4, 1e6):
        ki = 0.3
        g = math.sqrt(2.0 * c * ki)
        p = CqedParams(g, 1.0, ki, 1.0)
        approx = g * math.sqrt(ki / p.gamma)
        rel = abs(kappa_ext_loss(p) / approx - 1.0)
        assert rel <= 1.0 / (4.0 * c)


def test_closed_form_rejects_lossless_cavity():
    with pytest.raises(ValueError):
        kappa_ext_loss(CqedParams(10.0, 1.0, 0.0, 1.0))


def test_loss_minimizer_matches_closed_form(rng):
    # high-cooperativity samples; the closed form is the large-C_int optimum
    for _ in range(25):
        ki = 10 ** rng.uniform(-2, 1)
        c = 10 ** rng.uniform(4, 6)
        g = math.sqrt(2.0 * c * ki)
        template = CqedParams(g, 1.0, ki, 1.0)
        res = optimize_kappa_ext(template, LONG_PULSE, objective="loss")
        assert res.kappa_ext_opt == pytest.approx(kappa_ext_loss(template), rel=1e-2)
        assert res.objective_kind == "loss"
        assert res.unimodal
        assert res.evaluations <= 40


def test_result_lies_inside_bracket_and_beats_endpoints():
    template = CqedParams(50.0, 1.0, 0.5, 1.0)
    res = optimize_kappa_ext(template, LONG_PULSE, objective="loss")
    lo, hi = res.bracket
    assert lo < res.kappa_ext_opt < hi
    for ke in (lo, hi):
        p_l = average_errors(
            CqedParams(50.0, ke, 0.5, 1.0), LONG_PULSE
        )[0]
        assert res.objective_value <= p_l + 1e-15


def test_optimum_never_loses_to_loss_formula_anchor():
    template = CqedParams(8.0, 1.0, 2.0, 1.0)
    spec = PulseSpec(1.0)
    res = optimize_kappa_ext(template, spec, objective="ftqc_P")
    anchor = kappa_ext_loss(template)
    p_l, p_c = average_errors(CqedParams(8.0, anchor, 2.0, 1.0), spec)
    assert res.objective_value <= ftqc_parameter(p_l, p_c) + 1e-15


def test_p_optimum_beats_loss_formula_clearly_for_low_loss_cavity():
    template = CqedParams(2.0, 1.0, 0.001, 1.0)
    spec = PulseSpec(30.0)
    res = optimize_kappa_ext(template, spec, objective="ftqc_P")
    anchor = kappa_ext_loss(template)
    p_l, p_c = average_errors(CqedParams(2.0, anchor, 0.001, 1.0), spec)
    p_anchor = ftqc_parameter(p_l, p_c)
    assert res.objective_value < 0.95 * p_anchor


def test_coupling_ratio_signs_by_regime():
    # overdamped cavity, short pulse: couple weaker than the loss optimum
    res = optimize_kappa_ext(CqedParams(245.0, 1.0, 10.0, 1.0), PulseSpec(0.3), "ftqc_P")
    assert res.kappa_ext_opt < kappa_ext_loss(CqedParams(245.0, 1.0, 10.0, 1.0))
    # low-loss cavity, moderate pulse: couple stronger
    res = optimize_kappa_ext(CqedParams(5.5, 1.0, 0.01, 1.0), PulseSpec(30.0), "ftqc_P")
    assert res.kappa_ext_opt > kappa_ext_loss(CqedParams(5.5, 1.0, 0.01, 1.0))


def test_coupling_ratio_crosses_unity_with_cavity_loss():
    spec = PulseSpec(0.3)
    ratios = []
    for ki in (0.1, 10.0):
        template = CqedParams(30.0, 1.0, ki, 1.0)
        res = optimize_kappa_ext(template, spec, "ftqc_P")
        ratios.append(res.kappa_ext_opt / kappa_ext_loss(template))
    assert math.log(ratios[0]) > 0 > math.log(ratios[1])


def test_objective_name_validated():
    with pytest.raises(ValueError):
        optimize_kappa_ext(CqedParams(10.0, 1.0, 0.1, 1.0), LONG_PULSE, "bogus")


def test_scaling_identity_and_reference_point():
    base = CqedParams(2.0, 0.05, 0.001, 1.0)
    same = scale_by_cavity_length(CavityScaling(base, 1.0))
    assert same == base
    scaled = scale_by_cavity_length(CavityScaling(base, 0.01))
    assert scaled.g == pytest.approx(20.0)
    assert scaled.kappa_int == pytest.approx(0.1)
    assert scaled.gamma == base.gamma


def test_scaling_preserves_internal_cooperativity(rng):
    base = CqedParams(3.7, 1.0, 0.02, 0.9)
    for r in 10 ** rng.uniform(-3, 2, 20):
        scaled = scale_by_cavity_length(CavityScaling(base, float(r)))
        assert scaled.c_int == pytest.approx(base.c_int, rel=1e-12)


def test_scaling_rejects_nonpositive_ratio():
    base = CqedParams(2.0, 0.05, 0.001, 1.0)
    for r in (0.0, -1.0):
        with pytest.raises(ValueError):
            CavityScaling(base, r)


def test_scan_input_validation():
    base = CqedParams(2.0, 0.05, 0.001, 1.0)
    with pytest.raises(ValueError):
        cavity_scan(base, [0.1, 1.0, 10.0], LONG_PULSE)  # too few
    with pytest.raises(ValueError):
        cavity_scan(base, [1.0, 2.0, 3.0, 4.0, 5.0], LONG_PULSE)  # too narrow
    with pytest.raises(ValueError):
        cavity_scan(base, [-1.0, 0.01, 0.1, 1.0, 10.0], LONG_PULSE)


def test_long_pulse_scan_is_flat():
    # scaling preserves C_int, and with re-optimized coupling the long-pulse
    # errors depend on C_int alone, so P must not move along the scan
    base = CqedParams(2.0, 0.05, 0.001, 1.0)
    result = cavity_scan(base, np.geomspace(1e-3, 10.0, 5), LONG_PULSE)
    values = [p.p_ftqc for p in result.points]
    assert max(values) / min(values) - 1.0 <= 0.05
    for point in result.points:
        assert point.params.c_int == pytest.approx(base.c_int, rel=1e-12)
        assert point.p_ftqc == pytest.approx(
            ftqc_parameter(point.p_loss, point.p_cond), abs=1e-12
        )


def test_scan_series_is_ordered_and_complete():
    base = CqedParams(2.0, 0.05, 0.001, 1.0)
    ratios = np.geomspace(1e-2, 1.0, 5)
    result = cavity_scan(base, ratios, LONG_PULSE)
    assert [p.ratio for p in result.points] == pytest.approx(list(ratios))
    assert result.fit_ok
    assert result.fit is not None and len(result.fit) == 3
