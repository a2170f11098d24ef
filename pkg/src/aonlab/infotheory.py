"""Entropies, the critical sample size, and divergence-from-null estimation.

The divergence between the observation law and the signal-free null model
with matched marginals obeys

    D(n) = n H(Y) - ln M + E[ln Z_0(n)]

where Z_0(n) counts the atoms consistent with n samples. The estimator
plugs a Monte Carlo mean of ln Z_0 into this identity, so the rearranged
form (1 - E ln Z / ln M) + D / ln M = n H(Y) / ln M holds by construction.
The normalized divergence is interpolated piecewise-linearly between the
integer sample counts bracketing beta * n_star; the left slope of that
interpolation is the discrete derivative whose entropy form is
cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import floor, log

import numpy as np

from ._validation import check_positive_int, check_seed
from .montecarlo import TrialTable, run_trials
from .posterior import binary_entropy
from .priors import DEFAULT_ENUMERATION_BUDGET, KSparsePrior


def prior_entropy(prior: KSparsePrior) -> float:
    """H(theta) = ln C(N, k) in nats, from the exact big-integer count."""
    return log(prior.n_atoms)


def output_entropy(channel) -> float:
    """H(Y) = h(P(Y = 1)) in nats."""
    return float(binary_entropy(channel.p))


def n_star(prior: KSparsePrior, channel) -> int:
    """Critical sample size floor(H(theta) / H(Y))."""
    h_y = output_entropy(channel)
    if h_y <= 0.0:
        raise ValueError("channel output is degenerate (H(Y) = 0)")
    return floor(prior_entropy(prior) / h_y)


def kl_estimate(prior, channel, n, trials, seed, budget=DEFAULT_ENUMERATION_BUDGET):
    """Divergence-from-null estimate at sample count n, with standard error.

    n = 0 is exact: every trial sees ln Z = ln M, so the estimate is 0.
    Estimates may dip below zero through Monte Carlo noise; they are
    reported raw, never clamped.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 0.0, 0.0
    check_positive_int(trials, "trials", minimum=2)
    table = run_trials(prior, channel, [n], trials, seed, budget=budget)
    return table.kl(n)


@dataclass(frozen=True)
class DnCurve:
    """Normalized-divergence interpolation over a beta grid.

    Values anchor at integer sample counts n = floor(beta * n_star) and
    n + 1; per-anchor trial tables are retained so slopes and their errors
    use the same common-random-number trials as the values.
    """

    beta_grid: np.ndarray
    values: np.ndarray
    stderrs: np.ndarray
    n_star: int
    n_low: np.ndarray
    n_high: np.ndarray
    left_derivs: np.ndarray
    left_deriv_ses: np.ndarray
    pred_ratios: np.ndarray
    pred_ratio_ses: np.ndarray
    table: TrialTable

    def to_csv(self) -> str:
        lines = ["beta,n_low,n_high,dn,stderr,left_deriv,pred_entropy_ratio"]
        for i in range(len(self.beta_grid)):
            lines.append(
                f"{self.beta_grid[i]:.10g},{self.n_low[i]},{self.n_high[i]},"
                f"{self.values[i]:.10g},{self.stderrs[i]:.10g},"
                f"{self.left_derivs[i]:.10g},{self.pred_ratios[i]:.10g}"
            )
        return "\n".join(lines) + "\n"


def _segment_slope(table: TrialTable, m: int, ns: int, log_m: float):
    """Slope of the interpolation segment from (m-1)/n_star to m/n_star,
    with its standard error from per-trial anchored differences."""
    d = table.kl_trial_values(m) - table.kl_trial_values(m - 1)
    mean, se = table.mean_se(d)
    scale = ns / log_m
    return mean * scale, se * scale


def dn_curve(
    prior,
    channel,
    beta_grid,
    trials,
    seed,
    mc_draws=256,
    budget=DEFAULT_ENUMERATION_BUDGET,
) -> DnCurve:
    """Evaluate the normalized-divergence interpolation on a beta grid.

    One common-random-number pass serves every anchor: trials share signal
    and design streams across sample counts, so posteriors are exactly
    nested and anchored differences are low variance.
    """
    betas = np.asarray(sorted(float(b) for b in beta_grid))
    if len(betas) == 0 or betas[0] <= 0.0:
        raise ValueError("beta values must be positive")
    check_positive_int(trials, "trials", minimum=2)
    seed = check_seed(seed)
    if prior.degenerate:
        raise ValueError("prior has a single atom; normalized curves are undefined")
    ns = n_star(prior, channel)
    if ns < 1:
        raise ValueError("n_star < 1; the prior is too small for this channel")
    log_m = prior_entropy(prior)
    h_y = output_entropy(channel)

    n_low = np.floor(betas * ns).astype(int)
    n_high = n_low + 1
    m_anchor = np.ceil(betas * ns).astype(int)
    m_anchor = np.maximum(m_anchor, 1)
    anchors = set(n_low) | set(n_high) | set(m_anchor) | set(m_anchor - 1)
    pred_anchors = sorted(set(m_anchor - 1))
    table = run_trials(
        prior,
        channel,
        sorted(anchors),
        trials,
        seed,
        pred_anchors=pred_anchors,
        mc_draws=mc_draws,
        budget=budget,
    )

    values = np.empty(len(betas))
    stderrs = np.empty(len(betas))
    slopes = np.empty(len(betas))
    slope_ses = np.empty(len(betas))
    pred_ratios = np.empty(len(betas))
    pred_ratio_ses = np.empty(len(betas))
    for i, beta in enumerate(betas):
        frac = beta * ns - n_low[i]
        per_trial = (
            (1.0 - frac) * table.kl_trial_values(int(n_low[i]))
            + frac * table.kl_trial_values(int(n_high[i]))
        ) / log_m
        values[i], stderrs[i] = table.mean_se(per_trial)
        slopes[i], slope_ses[i] = _segment_slope(table, int(m_anchor[i]), ns, log_m)
        pred_mean, pred_se = table.predictive_entropy(int(m_anchor[i]) - 1)
        pred_ratios[i] = pred_mean / h_y
        pred_ratio_ses[i] = pred_se / h_y
    return DnCurve(
        beta_grid=betas,
        values=values,
        stderrs=stderrs,
        n_star=ns,
        n_low=n_low,
        n_high=n_high,
        left_derivs=slopes,
        left_deriv_ses=slope_ses,
        pred_ratios=pred_ratios,
        pred_ratio_ses=pred_ratio_ses,
        table=table,
    )


def left_derivative(curve: DnCurve, beta):
    """Left slope of the interpolation at beta: the segment ending at
    ceil(beta n_star) / n_star. beta must lie strictly inside the grid."""
    b = float(beta)
    if not curve.beta_grid[0] < b < curve.beta_grid[-1]:
        raise ValueError(
            f"beta must lie strictly inside ({curve.beta_grid[0]}, {curve.beta_grid[-1]})"
        )
    m = max(1, int(np.ceil(b * curve.n_star)))
    log_m = curve.table.log_m
    return _segment_slope(curve.table, m, curve.n_star, log_m)
