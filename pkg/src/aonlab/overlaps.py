"""Output-agreement probabilities as functions of signal overlap.

For two signals with overlap rho the channel outputs agree with probability
R(rho) = R0(rho) + R1(rho), where R1/R0 are the both-one / both-zero
probabilities. Pooled testing admits closed forms; balanced Gaussian models
are evaluated through an orthonormal Hermite expansion of the set indicator,
with the half-space case cross-checkable against the classical arcsine
formula for Gaussian orthants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

import numpy as np
from scipy.stats import norm

from ._validation import check_positive_int, check_probability, check_seed
from .channels import BalancedSet
from .priors import KSparsePrior
from .sampling import stream

HERMITE_ORDER_CAP = 200
DEFAULT_HERMITE_ORDER = 128
DEFAULT_GRID_POINTS = 1001
CURVE_SUM_TOL = 1e-9


def _check_rho(rho, *, allow_one=True):
    r = float(rho)
    hi_ok = r <= 1.0 if allow_one else r < 1.0
    if not (0.0 <= r and hi_ok):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise ValueError(f"rho must lie in {bound}, got {rho}")
    return r


def bgt_r1(rho, q):
    """Both tests positive: 1 - 2q + q^(2 - rho)."""
    r = _check_rho(rho)
    q = check_probability(q, "q")
    return 1.0 - 2.0 * q + q ** (2.0 - r)


def bgt_r0(rho, q):
    """Both tests negative: q^(2 - rho)."""
    r = _check_rho(rho)
    q = check_probability(q, "q")
    return q ** (2.0 - r)


def bgt_agreement(rho, q):
    """Total agreement probability 1 - 2q + 2 q^(2 - rho)."""
    return bgt_r1(rho, q) + bgt_r0(rho, q)


def sheppard(rho):
    """P(Z >= 0, Z_rho >= 0) = (1/4)(1 + (2/pi) arcsin rho) for a correlated
    standard Gaussian pair; the half-space both-one probability."""
    r = _check_rho(rho)
    return 0.25 * (1.0 + (2.0 / np.pi) * np.arcsin(r))


@dataclass(frozen=True)
class HermiteExpansion:
    """Coefficients of a set indicator in the orthonormal Hermite basis.

    coeffs[j] is the coefficient on He_j / sqrt(j!) under the standard
    Gaussian weight; tail_deficit is the L2 mass not captured by the
    truncation (E[f^2] = 1/2 for a balanced set, minus the partial sum).
    """

    coeffs: np.ndarray
    tail_deficit: float

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def squared(self) -> np.ndarray:
        return np.asarray(self.coeffs) ** 2


def _weighted_hermite_column(x: float, order: int) -> np.ndarray:
    """psi_j(x) = He_j(x) phi(x) / sqrt(j!) for j = 0..order.

    The normalized three-term recurrence is stable at the moderate
    endpoint magnitudes that matter under the Gaussian weight.
    """
    psi = np.zeros(order + 1)
    if not np.isfinite(x):
        return psi
    phi = norm.pdf(x)
    psi[0] = phi
    if order >= 1:
        psi[1] = x * phi
    for j in range(1, order):
        psi[j + 1] = (x * psi[j] - np.sqrt(j) * psi[j - 1]) / np.sqrt(j + 1)
    return psi


def hermite_coeffs(region: BalancedSet, order: int = DEFAULT_HERMITE_ORDER) -> HermiteExpansion:
    """Expansion coefficients of the region indicator, in closed form.

    For j >= 1 the integral of He_j against the Gaussian weight over [a, b]
    telescopes to weighted Hermite values at the endpoints, so each
    coefficient is a finite endpoint sum; the zeroth coefficient is the
    Gaussian mass of the region (1/2 for a balanced set).
    """
    order = check_positive_int(order, "order")
    if order > HERMITE_ORDER_CAP:
        raise ValueError(
            f"expansion order {order} exceeds the stability cap {HERMITE_ORDER_CAP}"
        )
    coeffs = np.zeros(order + 1)
    coeffs[0] = sum(norm.cdf(b) - norm.cdf(a) for a, b in region.intervals)
    scale = 1.0 / np.sqrt(np.arange(1, order + 1))
    for a, b in region.intervals:
        psi_a = _weighted_hermite_column(a, order - 1)
        psi_b = _weighted_hermite_column(b, order - 1)
        coeffs[1:] += (psi_a - psi_b) * scale
    squared_sum = float((coeffs**2).sum())
    if squared_sum > 0.5 + CURVE_SUM_TOL:
        raise AssertionError("coefficient energy exceeds E[f^2] = 1/2")
    return HermiteExpansion(coeffs=coeffs, tail_deficit=max(0.0, 0.5 - squared_sum))


def sbg_r1(rho, expansion: HermiteExpansion):
    """Both-one probability sum over k of rho^k fhat_k^2, with a tail bound.

    Returns (value, tail_bound). rho = 1 is rejected: the series boundary
    value is E[f^2] = 1/2 and is supplied by the exact branch in
    `sbg_curves` instead.
    """
    r = _check_rho(rho, allow_one=False)
    powers = r ** np.arange(len(expansion.coeffs))
    value = float((powers * expansion.squared).sum())
    tail = r ** (expansion.order + 1) * expansion.tail_deficit / (1.0 - r)
    return value, tail


@dataclass(frozen=True)
class OverlapCurves:
    """R1, R0 and their sum on a sorted overlap grid."""

    grid: np.ndarray
    r1: np.ndarray
    r0: np.ndarray
    r: np.ndarray
    source: str
    tail_bounds: np.ndarray

    def __post_init__(self):
        for name in ("grid", "r1", "r0", "r", "tail_bounds"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if not (len(self.grid) == len(self.r1) == len(self.r0) == len(self.r) == len(self.tail_bounds)):
            raise ValueError("curve arrays must share the grid length")
        if (np.diff(self.grid) <= 0).any():
            raise ValueError("grid must be strictly increasing")
        if np.abs(self.r - (self.r0 + self.r1)).max() > CURVE_SUM_TOL:
            raise ValueError("agreement must decompose as R = R0 + R1")
        for name in ("r1", "r0", "r"):
            vals = getattr(self, name)
            if vals.min() < -CURVE_SUM_TOL or vals.max() > 1.0 + CURVE_SUM_TOL:
                raise ValueError(f"{name} must stay within [0, 1]")

    def to_csv(self) -> str:
        lines = ["rho,r1,r0,r,source,tail_bound"]
        for i in range(len(self.grid)):
            lines.append(
                f"{self.grid[i]:.10g},{self.r1[i]:.10g},{self.r0[i]:.10g},"
                f"{self.r[i]:.10g},{self.source},{self.tail_bounds[i]:.6g}"
            )
        return "\n".join(lines) + "\n"


def default_grid(points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    check_positive_int(points, "points", minimum=2)
    return np.linspace(0.0, 1.0, points)


def bgt_curves(q, grid=None) -> OverlapCurves:
    """Closed-form pooled-testing curves on the grid."""
    q = check_probability(q, "q")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    r1 = 1.0 - 2.0 * q + q ** (2.0 - grid)
    r0 = q ** (2.0 - grid)
    return OverlapCurves(
        grid=grid,
        r1=r1,
        r0=r0,
        r=r1 + r0,
        source="closed-form",
        tail_bounds=np.zeros_like(grid),
    )


def sbg_curves(expansion: HermiteExpansion, grid=None) -> OverlapCurves:
    """Balanced-model curves from the expansion; rho = 1 uses the exact
    boundary values R1 = R0 = 1/2 where the series converges too slowly."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    r1 = np.empty_like(grid)
    tails = np.zeros_like(grid)
    for i, rho in enumerate(grid):
        if rho == 1.0:
            r1[i] = 0.5
        else:
            r1[i], tails[i] = sbg_r1(rho, expansion)
    # Balanced set: both-zero and both-one probabilities coincide.
    return OverlapCurves(
        grid=grid,
        r1=r1,
        r0=r1.copy(),
        r=2.0 * r1,
        source="hermite-series",
        tail_bounds=tails,
    )


def bgt_agreement_mc(q, k, shared, draws, seed):
    """Monte Carlo oracle for the pooled-testing agreement probabilities.

    Builds two supports of size k sharing `shared` indices and samples the
    per-item test membership only on their union. Returns
    (r1_hat, r0_hat, se1, se0).
    """
    q = check_probability(q, "q")
    k = check_positive_int(k, "k")
    if not 0 <= shared <= k:
        raise ValueError("shared support size must lie in [0, k]")
    draws = check_positive_int(draws, "draws")
    rng = stream(check_seed(seed))
    union = 2 * k - shared
    from .channels import bgt_solve_nu

    rate = bgt_solve_nu(q, k) / k
    bits = rng.random((draws, union)) < rate
    ya = bits[:, :k].any(axis=1)
    yb = bits[:, k - shared :].any(axis=1)
    r1_hat = float((ya & yb).mean())
    r0_hat = float((~ya & ~yb).mean())
    se1 = float(np.sqrt(r1_hat * (1.0 - r1_hat) / draws))
    se0 = float(np.sqrt(r0_hat * (1.0 - r0_hat) / draws))
    return r1_hat, r0_hat, se1, se0


def sbg_r1_mc(region: BalancedSet, rho, draws, seed):
    """Monte Carlo oracle for the balanced-model both-one probability via a
    correlated standard Gaussian pair. Returns (estimate, stderr)."""
    r = _check_rho(rho)
    draws = check_positive_int(draws, "draws")
    rng = stream(check_seed(seed))
    z1 = rng.standard_normal(draws)
    z2 = r * z1 + np.sqrt(1.0 - r * r) * rng.standard_normal(draws)
    both = region.contains(z1) & region.contains(z2)
    est = float(both.mean())
    return est, float(np.sqrt(est * (1.0 - est) / draws))


def mc_curves(q, k, draws, seed) -> OverlapCurves:
    """Monte Carlo pooled-testing curves on the feasible grid l/k."""
    k = check_positive_int(k, "k")
    grid = np.arange(k + 1) / k
    r1 = np.empty(k + 1)
    r0 = np.empty(k + 1)
    ses = np.empty(k + 1)
    for ell in range(k + 1):
        r1[ell], r0[ell], se1, se0 = bgt_agreement_mc(q, k, ell, draws, seed + ell)
        ses[ell] = 3.0 * max(se1, se0)
    return OverlapCurves(
        grid=grid,
        r1=r1,
        r0=r0,
        r=r1 + r0,
        source="monte-carlo",
        tail_bounds=ses,
    )


def overlap_pmf(n_dims, k) -> np.ndarray:
    """Law of the shared-support count of two independent prior draws:
    P(l) = C(k, l) C(N-k, k-l) / C(N, k), exact integer arithmetic then float."""
    k = check_positive_int(k, "k")
    n_dims = check_positive_int(n_dims, "n_dims")
    if k > n_dims:
        raise ValueError("k cannot exceed n_dims")
    total = comb(n_dims, k)
    return np.array(
        [float(Fraction(comb(k, l) * comb(n_dims - k, k - l), total)) for l in range(k + 1)]
    )


@dataclass(frozen=True)
class AssumptionReport:
    """Finite-size validation of the structural assumptions on R and the prior."""

    r_strictly_increasing: bool
    r0_nondecreasing: bool
    r1_nondecreasing: bool
    r_continuous_at_zero: bool
    overlap_rate_surplus: float

    @property
    def all_monotone(self) -> bool:
        return self.r_strictly_increasing and self.r0_nondecreasing and self.r1_nondecreasing


def validate_assumptions(curves: OverlapCurves, prior: KSparsePrior) -> AssumptionReport:
    """Report-only checks: monotonicity of the agreement curves, continuity of
    R at 0+, and the finite-size surrogate of the prior overlap-rate bound
    max over l of [ln P(overlap >= l/k) / ln M + l/k] (small is good; the
    asymptotic statement itself is out of reach at fixed N)."""
    if len(curves.grid) < 101:
        raise ValueError("need a grid of at least 101 points")
    slack = 1e-9
    dr = np.diff(curves.r)
    r_strict = bool((dr > -slack).all() and curves.r[-1] - curves.r[0] > slack)
    r0_mono = bool((np.diff(curves.r0) > -slack).all())
    r1_mono = bool((np.diff(curves.r1) > -slack).all())
    step_budget = 20.0 * (curves.r[-1] - curves.r[0]) / (len(curves.grid) - 1)
    continuous = bool(abs(curves.r[1] - curves.r[0]) <= step_budget + 1e-12)

    pmf = overlap_pmf(prior.n_dims, prior.k)
    log_m = np.log(float(prior.n_atoms))
    tail = np.cumsum(pmf[::-1])[::-1]
    levels = np.arange(prior.k + 1) / prior.k
    surplus = float((np.log(tail) / log_m + levels).max())
    return AssumptionReport(
        r_strictly_increasing=r_strict,
        r0_nondecreasing=r0_mono,
        r1_nondecreasing=r1_mono,
        r_continuous_at_zero=continuous,
        overlap_rate_surplus=surplus,
    )
