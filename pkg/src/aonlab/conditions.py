"""Grid verification of the overlap-rate condition and its analytic witnesses.

The recovery-transition condition compares the prior overlap-rate function
r(rho) against the exponent

    W(rho, p) = (1/h(p)) [ p ln(R1(rho)/p^2) + (1-p) ln(R0(rho)/(1-p)^2) ]

pointwise on [0, 1]. The checker evaluates margins r - W on a grid with an
explicit tolerance and reports how far from failure a configuration sits;
it verifies, it does not prove. Configurations with q > 1/2 are evaluated
but labeled outside the proven regime and get no phenomenon verdict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_probability
from .channels import BalancedSet
from .overlaps import HermiteExpansion, sbg_r1, sheppard
from .posterior import binary_entropy

DEFAULT_CONDITION_TOL = 1e-10
ENDPOINT_TOL = 1e-10
PROVEN_REGIME_NOTE = "outside proven regime (q > 1/2): condition status is descriptive only"


def condition_rhs(p, r1_vals, r0_vals):
    """The exponent W(rho, p) evaluated from agreement curves."""
    p = check_probability(p, "p")
    r1 = np.asarray(r1_vals, dtype=np.float64)
    r0 = np.asarray(r0_vals, dtype=np.float64)
    if (r1 <= 0).any() or (r0 <= 0).any():
        raise ValueError("agreement curves must be strictly positive on the grid")
    h = float(binary_entropy(p))
    return (p * np.log(r1 / p**2) + (1.0 - p) * np.log(r0 / (1.0 - p) ** 2)) / h


@dataclass(frozen=True)
class ConditionReport:
    grid: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    margins: np.ndarray
    min_margin: float
    argmin_rho: float
    equality_at_zero: bool
    equality_at_one: bool
    verdict: str
    tol: float
    regime_note: str = ""

    def to_text(self) -> str:
        lines = [
            f"verdict = {self.verdict}",
            f"min_margin = {self.min_margin:.6e}",
            f"argmin_rho = {self.argmin_rho:.6g}",
            f"equality_at_zero = {self.equality_at_zero}",
            f"equality_at_one = {self.equality_at_one}",
            f"tol = {self.tol:g}",
        ]
        if self.regime_note:
            lines.append(f"regime = {self.regime_note}")
        lines.append("grid = " + ",".join(f"{v:.6g}" for v in self.grid))
        lines.append("lhs = " + ",".join(f"{v:.10g}" for v in self.lhs))
        lines.append("rhs = " + ",".join(f"{v:.10g}" for v in self.rhs))
        return "\n".join(lines) + "\n"


def check_condition(
    r0_vals,
    r1_vals,
    p,
    rate_fn,
    grid,
    tol=DEFAULT_CONDITION_TOL,
    regime_note="",
) -> ConditionReport:
    """Pointwise check r(rho) >= W(rho, p) - tol over the grid.

    Verdict policy: 'holds' when the minimum margin clears -tol, 'fails'
    when it is worse than -10 tol, 'inconclusive-near-tolerance' between.
    """
    grid = np.asarray(grid, dtype=np.float64)
    rhs = condition_rhs(p, r1_vals, r0_vals)
    lhs = np.asarray([float(rate_fn(rho)) for rho in grid])
    margins = lhs - rhs
    i_min = int(np.argmin(margins))
    min_margin = float(margins[i_min])
    if min_margin >= -tol:
        verdict = "holds"
    elif min_margin >= -10.0 * tol:
        verdict = "inconclusive-near-tolerance"
    else:
        verdict = "fails"
    eq0 = bool(grid[0] == 0.0 and abs(margins[0]) <= ENDPOINT_TOL)
    eq1 = bool(grid[-1] == 1.0 and abs(margins[-1]) <= ENDPOINT_TOL)
    return ConditionReport(
        grid=grid,
        lhs=lhs,
        rhs=rhs,
        margins=margins,
        min_margin=min_margin,
        argmin_rho=float(grid[i_min]),
        equality_at_zero=eq0,
        equality_at_one=eq1,
        verdict=verdict,
        tol=tol,
        regime_note=regime_note,
    )


def bgt_reduced_margin(rho, q):
    """The pooled-testing condition margin in its reduced form.

    Because R0(rho) = (1-p)^(2-rho) identically, the condition collapses to
    R1(rho) <= p^(2-rho); this margin must match rho - W(rho, p) exactly.
    """
    q = check_probability(q, "q")
    p = 1.0 - q
    h = float(binary_entropy(p))
    r1 = 1.0 - 2.0 * q + q ** (2.0 - rho)
    return -p * np.log(r1 / p ** (2.0 - rho)) / h


@dataclass(frozen=True)
class WitnessReport:
    q: float
    supported_regime: bool
    f_at_zero: float
    f_at_one: float
    endpoint_value: float
    concavity_slack: float
    g_value: float

    @property
    def passed(self) -> bool:
        ok_ends = (
            abs(self.f_at_zero - self.endpoint_value) <= 1e-12
            and abs(self.f_at_one - self.endpoint_value) <= 1e-12
        )
        return ok_ends and self.concavity_slack >= -1e-12 and self.g_value >= -1e-15

    def to_text(self) -> str:
        return (
            f"q = {self.q:g}\n"
            f"supported_regime = {self.supported_regime}\n"
            f"f_at_zero = {self.f_at_zero:.12g}\n"
            f"f_at_one = {self.f_at_one:.12g}\n"
            f"endpoint_value = {self.endpoint_value:.12g}\n"
            f"concavity_slack = {self.concavity_slack:.6e}\n"
            f"g_value = {self.g_value:.6e}\n"
            f"passed = {self.passed}\n"
        )


def bgt_witnesses(q, grid_points=1001) -> WitnessReport:
    """Analytic witnesses behind the pooled-testing condition.

    f(rho) = (1-q)^(2-rho) - q^(2-rho) must equal 1-2q at both endpoints and
    be concave on [0, 1]; g(q) = (1-q) ln(1-q) - q ln q must be nonnegative.
    Both hold for q <= 1/2; larger q is evaluated but flagged unsupported.
    """
    q = check_probability(q, "q")
    supported = q <= 0.5
    grid = np.linspace(0.0, 1.0, grid_points)
    base = 1.0 - q
    f = base ** (2.0 - grid) - q ** (2.0 - grid)
    f_second = np.log(base) ** 2 * base ** (2.0 - grid) - np.log(q) ** 2 * q ** (2.0 - grid)
    g_value = base * np.log(base) - q * np.log(q)
    return WitnessReport(
        q=q,
        supported_regime=supported,
        f_at_zero=float(f[0]),
        f_at_one=float(f[-1]),
        endpoint_value=1.0 - 2.0 * q,
        concavity_slack=float(-(f_second.max())),
        g_value=float(g_value),
    )


@dataclass(frozen=True)
class ArcsineReport:
    grid: np.ndarray
    slack: np.ndarray
    min_interior_slack: float
    slack_at_zero: float
    slack_at_one: float
    passed: bool

    def to_text(self) -> str:
        return (
            f"min_interior_slack = {self.min_interior_slack:.6e}\n"
            f"slack_at_zero = {self.slack_at_zero:.3e}\n"
            f"slack_at_one = {self.slack_at_one:.3e}\n"
            f"passed = {self.passed}\n"
        )


def arcsine_inequality_check(grid=None) -> ArcsineReport:
    """Verify 2^rho >= 1 + (2/pi) arcsin(rho) pointwise, with equality only
    at the endpoints."""
    if grid is None:
        grid = np.linspace(0.0, 1.0, 10001)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise ValueError("grid must lie within [0, 1]")
    slack = 2.0**grid - 1.0 - (2.0 / np.pi) * np.arcsin(grid)
    interior = (grid > 0.0) & (grid < 1.0)
    min_interior = float(slack[interior].min()) if interior.any() else np.inf
    at_zero = float(slack[grid == 0.0][0]) if (grid == 0.0).any() else np.nan
    at_one = float(slack[grid == 1.0][0]) if (grid == 1.0).any() else np.nan
    return ArcsineReport(
        grid=grid,
        slack=slack,
        min_interior_slack=min_interior,
        slack_at_zero=at_zero,
        slack_at_one=at_one,
        passed=bool((slack >= -1e-12).all()),
    )


@dataclass(frozen=True)
class BorellReport:
    grid: np.ndarray
    series: np.ndarray
    bound: np.ndarray
    max_excess: float
    passed: bool

    def to_text(self) -> str:
        return f"max_excess = {self.max_excess:.6e}\npassed = {self.passed}\n"


def borell_bound_check(
    region: BalancedSet,
    grid=None,
    expansion: HermiteExpansion | None = None,
    tol=1e-12,
) -> BorellReport:
    """Check the half-space extremality bound: for any balanced region the
    both-one probability never exceeds the Gaussian orthant value, within
    the expansion's truncation tail."""
    from .overlaps import DEFAULT_HERMITE_ORDER, hermite_coeffs

    if grid is None:
        grid = np.linspace(0.0, 1.0, 1001)
    grid = np.asarray(grid, dtype=np.float64)
    if expansion is None:
        expansion = hermite_coeffs(region, DEFAULT_HERMITE_ORDER)
    series = np.empty_like(grid)
    excess = np.empty_like(grid)
    for i, rho in enumerate(grid):
        if rho == 1.0:
            series[i] = 0.5
            tail = 0.0
        else:
            series[i], tail = sbg_r1(rho, expansion)
        excess[i] = series[i] - (sheppard(rho) + tail + tol)
    bound = np.array([sheppard(r) for r in grid])
    return BorellReport(
        grid=grid,
        series=series,
        bound=bound,
        max_excess=float(excess.max()),
        passed=bool((excess <= 0.0).all()),
    )
