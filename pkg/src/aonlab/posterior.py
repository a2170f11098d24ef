"""Exact posterior by enumeration.

With a uniform prior and a noiseless channel the posterior given (Y^n, X^n)
is the uniform distribution over the prior atoms that reproduce every
observation, so the whole engine is consistent-set filtering: counting,
means, entropies and squared errors are exact functionals of that set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._validation import (
    check_binary_targets,
    check_design_matrix,
    check_is_fitted,
    check_positive_int,
    check_seed,
)
from .priors import DEFAULT_ENUMERATION_BUDGET, KSparsePrior, Signal
from .sampling import Dataset, stream


def binary_entropy(p):
    """h(p) = -p ln p - (1-p) ln(1-p) in nats, with h(0) = h(1) = 0."""
    arr = np.asarray(p, dtype=np.float64)
    out = np.zeros_like(arr)
    inner = (arr > 0.0) & (arr < 1.0)
    a = arr[inner]
    out[inner] = -a * np.log(a) - (1.0 - a) * np.log1p(-a)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PosteriorState:
    """Consistent atoms after filtering one dataset.

    `truth` is kept for diagnostics only; no estimate ever reads it.
    """

    prior: KSparsePrior
    channel: object
    atom_indices: np.ndarray
    truth: Signal | None = None

    @property
    def z0(self) -> int:
        """Number of consistent atoms; at least 1 for generated data."""
        return len(self.atom_indices)

    @cached_property
    def supports(self) -> np.ndarray:
        return self.prior.support_matrix[self.atom_indices]

    @cached_property
    def atom_pack(self) -> np.ndarray:
        return self.channel.atom_pack(self.prior)[self.atom_indices]

    def signals(self):
        for row in self.supports:
            yield Signal(self.prior.n_dims, tuple(int(j) for j in row))

    @cached_property
    def support_counts(self) -> np.ndarray:
        """How many consistent atoms contain each coordinate."""
        return np.bincount(self.supports.ravel(), minlength=self.prior.n_dims)

    def mean_vector(self) -> np.ndarray:
        """Posterior mean of the signal as a dense vector."""
        return self.support_counts / (self.z0 * np.sqrt(self.prior.k))

    def overlap_histogram(self, signal: Signal) -> np.ndarray:
        """Counts of atoms at each shared-support level l = 0..k with `signal`."""
        cols = np.asarray(signal.support, dtype=np.intp)
        marked = np.zeros(self.prior.n_dims, dtype=np.uint8)
        marked[cols] = 1
        shared = marked[self.supports].sum(axis=1)
        return np.bincount(shared, minlength=self.prior.k + 1)


def filter_consistent(prior, channel, dataset: Dataset, budget=None) -> PosteriorState:
    """Atoms consistent with every sample, filtering incrementally so early
    samples shrink the candidate set before later ones are evaluated."""
    prior.require_within_budget(budget if budget is not None else DEFAULT_ENUMERATION_BUDGET)
    pack = channel.atom_pack(prior)
    rows = channel.row_pack(dataset.xs)
    idx = np.arange(prior.n_atoms)
    for i in range(dataset.n):
        resp = channel.respond(rows[i : i + 1], pack[idx])[0]
        idx = idx[resp == dataset.ys[i]]
        if idx.size == 0:
            break
    if idx.size == 0:
        raise ValueError("observations are inconsistent with every prior atom")
    return PosteriorState(prior, channel, idx, truth=dataset.signal)


def z_count(state: PosteriorState, signal: Signal, delta) -> int:
    """Number of consistent atoms at squared distance >= delta from `signal`.

    Squared distance on the sphere is 2 (1 - overlap), so the count reduces
    to a shared-support histogram lookup.
    """
    d = float(delta)
    if not 0.0 <= d <= 2.0:
        raise ValueError(f"delta must lie in [0, 2], got {delta}")
    hist = state.overlap_histogram(signal)
    k = state.prior.k
    levels = np.arange(k + 1)
    far = 2.0 * (k - levels) / k >= d
    return int(hist[far].sum())


def instance_error(state: PosteriorState, signal: Signal):
    """Squared error of this instance, two ways.

    direct    ||theta - posterior mean||^2
    counting  (1/2) (1/Z_0) sum over atoms of ||theta - theta'||^2, the
              distance-tail integral collapsed exactly over the discrete
              overlap levels l/k (no quadrature)

    The two agree in expectation over (theta, data); per instance they differ.
    """
    hist = state.overlap_histogram(signal)
    k = state.prior.k
    z0 = state.z0
    levels = np.arange(k + 1) / k
    mean_overlap = float((hist * levels).sum()) / z0
    counts = state.support_counts
    mean_sq = float((counts.astype(np.float64) ** 2).sum()) / (z0 * z0 * k)
    direct = 1.0 - 2.0 * mean_overlap + mean_sq
    counting = 1.0 - mean_overlap
    return direct, counting


def posterior_entropy(state: PosteriorState) -> float:
    """Entropy in nats of the uniform posterior: ln Z_0."""
    return float(np.log(state.z0))


def predictive_entropy(state: PosteriorState, channel, mc_draws: int, seed: int) -> float:
    """Monte Carlo estimate of the next-observation conditional entropy.

    Averages h(p_hat(x)) over fresh design rows x, where p_hat(x) is the
    fraction of consistent atoms mapping x to 1 (the exact posterior
    predictive probability).
    """
    check_positive_int(mc_draws, "mc_draws")
    rng = stream(check_seed(seed))
    fresh = channel.sample_design(rng, mc_draws)
    resp = channel.respond(channel.row_pack(fresh), state.atom_pack)
    p_hat = resp.mean(axis=1)
    return float(np.mean(binary_entropy(p_hat)))


class ExactPosterior:
    """Estimator-style front end for the exact posterior.

    fit(X, y) filters the prior down to the atoms consistent with the
    observations; predict_proba scores fresh design rows with the posterior
    predictive probability of a positive output.
    """

    def __init__(self, channel, enumeration_budget=DEFAULT_ENUMERATION_BUDGET):
        self.channel = channel
        self.enumeration_budget = enumeration_budget

    def get_params(self, deep=True):
        return {"channel": self.channel, "enumeration_budget": self.enumeration_budget}

    def set_params(self, **params):
        for key, value in params.items():
            if key not in self.get_params():
                raise ValueError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        return self

    def fit(self, X, y):
        channel = self.channel
        X = check_design_matrix(X, channel.n_dims, binary=channel.binary_design)
        y = check_binary_targets(y, len(X))
        prior = channel.prior()
        dataset = Dataset(xs=X, ys=y, signal=None)
        self.state_ = filter_consistent(prior, channel, dataset, budget=self.enumeration_budget)
        self.z0_ = self.state_.z0
        self.posterior_mean_ = self.state_.mean_vector()
        self.entropy_ = posterior_entropy(self.state_)
        return self

    def predict_proba(self, X):
        check_is_fitted(self)
        channel = self.channel
        X = check_design_matrix(X, channel.n_dims, binary=channel.binary_design)
        resp = channel.respond(channel.row_pack(X), self.state_.atom_pack)
        p1 = resp.mean(axis=1)
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.uint8)
