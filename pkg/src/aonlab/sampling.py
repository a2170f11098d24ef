"""Dataset generation with reproducible counter-based random streams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_seed
from .priors import Signal


def stream(master_seed: int, *counters: int) -> np.random.Generator:
    """Independent generator for (master seed, counter...) so that parallel
    and serial execution orders see identical draws."""
    return np.random.default_rng([check_seed(master_seed)] + [int(c) for c in counters])


@dataclass(frozen=True)
class Dataset:
    """n observation pairs; ys[i] is the channel output of xs[i] on `signal`."""

    xs: np.ndarray
    ys: np.ndarray
    signal: Signal | None = None

    @property
    def n(self) -> int:
        return len(self.ys)


def generate_dataset(channel, signal: Signal, n: int, seed: int) -> Dataset:
    """Draw n i.i.d. design rows from the channel law and label them with the
    noiseless channel output; fully deterministic in (channel, signal, n, seed).
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if signal.n_dims != channel.n_dims or signal.k != channel.k:
        raise ValueError("signal does not match channel dimensions")
    rng = stream(seed)
    xs = channel.sample_design(rng, n)
    ys = channel.respond_rows(xs, signal)
    assert ys.shape == (n,)
    return Dataset(xs=xs, ys=ys, signal=signal)
