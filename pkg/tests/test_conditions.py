import numpy as np
import pytest

from aonlab.channels import BalancedSet
from aonlab.conditions import (
    arcsine_inequality_check,
    bgt_reduced_margin,
    bgt_witnesses,
    borell_bound_check,
    check_condition,
    condition_rhs,
)
from aonlab.overlaps import bgt_curves, hermite_coeffs, sbg_curves
from aonlab.posterior import binary_entropy


def identity_rate(t):
    return t


# --- the main condition -------------------------------------------------------

def test_condition_zero_overlap_equality():
    # R1(0) = p^2 and R0(0) = (1-p)^2 force rhs = 0 = lhs at rho = 0
    for q in (0.2, 0.5):
        grid = np.linspace(0, 1, 101)
        curves = bgt_curves(q, grid)
        report = check_condition(curves.r0, curves.r1, 1 - q, identity_rate, grid)
        assert report.equality_at_zero
        assert abs(report.margins[0]) <= 1e-12


def test_condition_holds_for_bgt_small_q():
    grid = np.linspace(0, 1, 1001)
    for q in (0.1, 0.3, 0.5):
        curves = bgt_curves(q, grid)
        report = check_condition(curves.r0, curves.r1, 1 - q, identity_rate, grid)
        assert report.verdict == "holds"
        assert report.min_margin >= -1e-10
        assert report.equality_at_zero and report.equality_at_one
        # strict inequality away from the endpoints for q < 1/2
        if q < 0.5:
            interior = report.margins[1:-1]
            assert interior.min() > 0


def test_condition_equality_everywhere_at_q_half():
    # q = 1/2 makes both output symbols equally informative: the reduced
    # margin is identically zero
    grid = np.linspace(0, 1, 1001)
    curves = bgt_curves(0.5, grid)
    report = check_condition(curves.r0, curves.r1, 0.5, identity_rate, grid)
    assert np.abs(report.margins).max() <= 1e-12
    assert report.verdict == "holds"


def test_condition_fails_outside_proven_regime():
    grid = np.linspace(0, 1, 1001)
    q = 0.7
    curves = bgt_curves(q, grid)
    report = check_condition(
        curves.r0, curves.r1, 1 - q, identity_rate, grid, regime_note="descriptive"
    )
    assert report.verdict == "fails"
    assert report.min_margin < -1e-6
    assert report.regime_note == "descriptive"


def test_condition_holds_for_balanced_models():
    grid = np.linspace(0, 1, 1001)
    for region in (BalancedSet.half_space(), BalancedSet.symmetric()):
        curves = sbg_curves(hermite_coeffs(region, 128), grid)
        report = check_condition(curves.r0, curves.r1, 0.5, identity_rate, grid)
        assert report.verdict == "holds"
        assert report.min_margin >= -1e-10
        assert report.equality_at_zero and report.equality_at_one


def test_condition_rejects_nonpositive_curves():
    grid = np.linspace(0, 1, 11)
    bad = np.zeros(11)
    with pytest.raises(ValueError, match="positive"):
        check_condition(bad, bad, 0.5, identity_rate, grid)


def test_rhs_matches_reduced_form_for_bgt():
    # with R0 = (1-p)^(2-rho) exactly, the condition margin collapses to the
    # one-sided form; both evaluations must agree to 1e-10
    grid = np.linspace(0, 1, 1001)
    for q in (0.1, 0.3, 0.5):
        curves = bgt_curves(q, grid)
        rhs = condition_rhs(1 - q, curves.r1, curves.r0)
        general_margin = grid - rhs
        reduced_margin = bgt_reduced_margin(grid, q)
        assert np.abs(general_margin - reduced_margin).max() <= 1e-10


def test_report_text_is_structured():
    grid = np.linspace(0, 1, 101)
    curves = bgt_curves(0.5, grid)
    report = check_condition(curves.r0, curves.r1, 0.5, identity_rate, grid)
    text = report.to_text()
    assert "verdict = holds" in text
    assert "min_margin" in text
    assert "lhs = " in text and "rhs = " in text


# --- analytic witnesses ---------------------------------------------------------

def test_witnesses_q_half_boundary():
    report = bgt_witnesses(0.5)
    assert report.supported_regime
    assert report.f_at_zero == pytest.approx(0.0, abs=1e-15)
    assert report.f_at_one == pytest.approx(0.0, abs=1e-15)
    assert report.g_value == pytest.approx(0.0, abs=1e-15)
    assert report.concavity_slack >= -1e-15
    assert report.passed


def test_witnesses_interior_q():
    report = bgt_witnesses(0.3)
    assert report.passed
    assert report.f_at_zero == pytest.approx(0.4, abs=1e-12)
    assert report.f_at_one == pytest.approx(0.4, abs=1e-12)
    assert report.concavity_slack > 0  # strictly concave
    assert report.g_value > 0
    # analytic second derivative oracle at a midpoint
    q, rho = 0.3, 0.5
    f2 = np.log(1 - q) ** 2 * (1 - q) ** (2 - rho) - np.log(q) ** 2 * q ** (2 - rho)
    assert f2 < 0


def test_witnesses_vanishing_q_limit():
    report = bgt_witnesses(1e-6)
    assert report.g_value > 0
    assert report.g_value == pytest.approx(0.0, abs=1e-4)


def test_witnesses_flag_unsupported_regime():
    report = bgt_witnesses(0.7)
    assert not report.supported_regime


# --- arcsine inequality ----------------------------------------------------------

def test_arcsine_endpoint_equalities_and_midpoint_slack():
    report = arcsine_inequality_check()
    assert report.passed
    assert report.slack_at_zero == pytest.approx(0.0, abs=1e-15)
    assert report.slack_at_one == pytest.approx(0.0, abs=1e-15)
    assert report.min_interior_slack > 0
    grid = np.array([0.0, 0.5, 1.0])
    mid = arcsine_inequality_check(grid)
    assert mid.slack[1] == pytest.approx(np.sqrt(2) - 4 / 3, abs=1e-12)


def test_arcsine_fine_grid_interior_strictly_positive():
    report = arcsine_inequality_check(np.linspace(0, 1, 10001))
    assert report.min_interior_slack > 0


def test_arcsine_rejects_bad_grid():
    with pytest.raises(ValueError):
        arcsine_inequality_check(np.array([-0.1, 0.5]))


# --- half-space extremality -------------------------------------------------------

def test_borell_half_space_saturates():
    report = borell_bound_check(BalancedSet.half_space())
    assert report.passed
    # equality within the truncation tail everywhere
    assert report.max_excess <= 0.0
    assert np.abs(report.series[0] - 0.25) <= 1e-12


def test_borell_symmetric_interval_strict():
    report = borell_bound_check(BalancedSet.symmetric())
    assert report.passed
    interior = slice(1, -1)
    assert (report.series[interior] < report.bound[interior]).all()


def test_borell_zero_overlap_quarter():
    report = borell_bound_check(BalancedSet.symmetric(), grid=np.array([0.0, 0.5, 1.0]))
    assert report.series[0] == pytest.approx(0.25, abs=1e-10)
    assert report.bound[0] == pytest.approx(0.25, abs=1e-15)


def test_condition_rhs_endpoint_one_is_unity():
    # R1(1) = p and R0(1) = 1-p make the rhs equal h(p)/h(p) = 1
    for p in (0.5, 0.7, 0.9):
        rhs = condition_rhs(p, np.array([p]), np.array([1 - p]))
        assert rhs[0] == pytest.approx(1.0, abs=1e-12)
        assert float(binary_entropy(p)) > 0
