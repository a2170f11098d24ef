"""Seeded Monte Carlo over (signal, dataset) trials with common random numbers.

One pass per trial draws a signal and a design stream of maximal length,
filters the posterior incrementally, and records statistics at every
requested sample-count anchor. Reusing the same trial streams across anchors
gives exactly nested posteriors and low-variance differences between
neighbouring sample counts.

Trial t of a run seeded with s draws from streams (s, t, 0) for the signal
and design rows and (s, t, 1) for predictive-entropy probes, so results do
not depend on execution order and parallel runs reproduce serial ones.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from math import log

import numpy as np

from ._validation import check_positive_int, check_seed
from .posterior import binary_entropy
from .priors import DEFAULT_ENUMERATION_BUDGET, KSparsePrior
from .sampling import stream


def thread_count() -> int:
    """Worker cap: AON_THREADS if set, else hardware parallelism."""
    env = os.environ.get("AON_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class TrialTable:
    """Per-trial statistics at each sample-count anchor.

    Arrays are (trials, len(anchors)); `overlap_hist` additionally carries the
    shared-support level so distance-tail counts can be recovered afterwards.
    """

    prior: KSparsePrior
    channel: object
    anchors: np.ndarray
    ln_z: np.ndarray
    direct: np.ndarray
    counting: np.ndarray
    overlap_hist: np.ndarray
    pred_anchors: np.ndarray
    pred_entropy: np.ndarray

    @property
    def trials(self) -> int:
        return self.ln_z.shape[0]

    @cached_property
    def log_m(self) -> float:
        return log(self.prior.n_atoms)

    def column(self, n: int) -> int:
        hits = np.nonzero(self.anchors == n)[0]
        if hits.size == 0:
            raise KeyError(f"sample count {n} was not recorded (anchors {self.anchors})")
        return int(hits[0])

    def pred_column(self, n: int) -> int:
        hits = np.nonzero(self.pred_anchors == n)[0]
        if hits.size == 0:
            raise KeyError(f"no predictive-entropy probe at n={n}")
        return int(hits[0])

    def mean_se(self, values: np.ndarray):
        mean = float(values.mean())
        se = float(values.std(ddof=1) / np.sqrt(len(values))) if len(values) > 1 else 0.0
        return mean, se

    def mmse(self, n: int):
        return self.mean_se(self.direct[:, self.column(n)])

    def counting_error(self, n: int):
        return self.mean_se(self.counting[:, self.column(n)])

    def kl_trial_values(self, n: int) -> np.ndarray:
        """Per-trial divergence estimates n H(Y) - ln M + ln Z_n."""
        from .infotheory import output_entropy

        h_y = output_entropy(self.channel)
        return n * h_y - self.log_m + self.ln_z[:, self.column(n)]

    def kl(self, n: int):
        return self.mean_se(self.kl_trial_values(n))

    def predictive_entropy(self, n: int):
        return self.mean_se(self.pred_entropy[:, self.pred_column(n)])

    def point_mass_fraction(self, n: int) -> float:
        """Fraction of trials whose posterior collapsed to a single atom."""
        return float((self.ln_z[:, self.column(n)] == 0.0).mean())

    def solution_freq(self, n: int, delta: float) -> float:
        """Empirical frequency of a consistent atom at squared distance
        >= delta from the truth (finite-size diagnostic only)."""
        if not 0.0 < delta <= 2.0:
            raise ValueError(f"delta must lie in (0, 2], got {delta}")
        k = self.prior.k
        levels = np.arange(k + 1)
        far = 2.0 * (k - levels) / k >= delta
        counts = self.overlap_hist[:, self.column(n), :][:, far].sum(axis=1)
        return float((counts > 0).mean())


def _run_one_trial(prior, channel, anchors, pred_anchors, mc_draws, seed, t):
    k = prior.k
    n_max = int(anchors.max()) if len(anchors) else 0
    if len(pred_anchors):
        n_max = max(n_max, int(pred_anchors.max()))

    rng = stream(seed, t, 0)
    support = np.sort(rng.choice(prior.n_dims, size=k, replace=False))
    signal = prior.signal(support)
    xs = channel.sample_design(rng, n_max)
    ys = channel.respond_rows(xs, signal)
    rows = channel.row_pack(xs)
    pack = channel.atom_pack(prior)
    supports = prior.support_matrix

    marked = np.zeros(prior.n_dims, dtype=np.uint8)
    marked[support] = 1

    fresh_pack = None
    if len(pred_anchors):
        rng_pred = stream(seed, t, 1)
        fresh = channel.sample_design(rng_pred, mc_draws)
        fresh_pack = channel.row_pack(fresh)

    anchor_set = {int(n): i for i, n in enumerate(anchors)}
    pred_set = {int(n): i for i, n in enumerate(pred_anchors)}

    ln_z = np.zeros(len(anchors))
    direct = np.zeros(len(anchors))
    counting = np.zeros(len(anchors))
    hist = np.zeros((len(anchors), k + 1), dtype=np.int64)
    pred = np.zeros(len(pred_anchors))

    idx = np.arange(prior.n_atoms)
    levels = np.arange(k + 1) / k
    for n in range(n_max + 1):
        col = anchor_set.get(n)
        if col is not None:
            z0 = idx.size
            sub = supports[idx]
            shared = marked[sub].sum(axis=1)
            h = np.bincount(shared, minlength=k + 1)
            hist[col] = h
            mean_overlap = float((h * levels).sum()) / z0
            coord = np.bincount(sub.ravel(), minlength=prior.n_dims)
            mean_sq = float((coord.astype(np.float64) ** 2).sum()) / (z0 * z0 * k)
            ln_z[col] = np.log(z0)
            direct[col] = 1.0 - 2.0 * mean_overlap + mean_sq
            counting[col] = 1.0 - mean_overlap
        pcol = pred_set.get(n)
        if pcol is not None:
            resp = channel.respond(fresh_pack, pack[idx])
            pred[pcol] = float(np.mean(binary_entropy(resp.mean(axis=1))))
        if n < n_max:
            resp = channel.respond(rows[n : n + 1], pack[idx])[0]
            idx = idx[resp == ys[n]]
    return ln_z, direct, counting, hist, pred


def run_trials(
    prior,
    channel,
    anchors,
    trials,
    seed,
    pred_anchors=(),
    mc_draws=256,
    budget=DEFAULT_ENUMERATION_BUDGET,
    workers=None,
) -> TrialTable:
    """Execute seeded trials and collect anchored statistics.

    Trials are independent work items; they may run on a thread pool but the
    result is assembled by trial index, so scheduling never affects output.
    """
    check_positive_int(trials, "trials")
    seed = check_seed(seed)
    prior.require_within_budget(budget)
    anchors = np.array(sorted({int(n) for n in anchors}), dtype=np.int64)
    pred_anchors = np.array(sorted({int(n) for n in pred_anchors}), dtype=np.int64)
    if (anchors < 0).any() or (pred_anchors < 0).any():
        raise ValueError("sample-count anchors must be nonnegative")
    if len(pred_anchors):
        check_positive_int(mc_draws, "mc_draws")
    # Materialize shared read-only caches before the pool starts.
    prior.support_matrix
    channel.atom_pack(prior)

    def work(t):
        return _run_one_trial(prior, channel, anchors, pred_anchors, mc_draws, seed, t)

    workers = workers if workers is not None else thread_count()
    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, range(trials)))
    else:
        results = [work(t) for t in range(trials)]

    ln_z = np.stack([r[0] for r in results])
    direct = np.stack([r[1] for r in results])
    counting = np.stack([r[2] for r in results])
    hist = np.stack([r[3] for r in results])
    pred = np.stack([r[4] for r in results])
    return TrialTable(
        prior=prior,
        channel=channel,
        anchors=anchors,
        ln_z=ln_z,
        direct=direct,
        counting=counting,
        overlap_hist=hist,
        pred_anchors=pred_anchors,
        pred_entropy=pred,
    )


def mmse_mc(channel, prior, n, trials, seed, budget=DEFAULT_ENUMERATION_BUDGET):
    """Mean and standard error of the per-instance squared error over seeded
    trials with the signal resampled each trial.

    n = 0 short-circuits to the exact prior value 1 - k/N with zero error:
    the posterior mean is the prior mean whatever the signal.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 1.0 - prior.k / prior.n_dims, 0.0
    check_positive_int(trials, "trials", minimum=2)
    table = run_trials(prior, channel, [n], trials, seed, budget=budget)
    return table.mmse(n)
