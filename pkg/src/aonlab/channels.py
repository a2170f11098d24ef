"""Noiseless boolean channels: Bernoulli pooled testing and balanced Gaussian models.

Both channels map a design row x and a k-sparse signal theta to one bit:

  pooled testing   y = 1(support(x) intersects support(theta))
  balanced model   y = 1(<x, theta> in A) with standard Gaussian rows and a
                   set A of standard Gaussian mass exactly 1/2

The balanced set A is represented as a finite union of disjoint intervals,
which keeps Gaussian masses and the downstream expansion coefficients in
closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import ndtr, ndtri

from ._validation import check_positive_int, check_probability
from .priors import KSparsePrior, Signal, pack_mask

NU_RELATIVE_TOL = 1e-12
BALANCE_TOL = 1e-10


def bgt_solve_nu(q, k):
    """Per-item test participation scale nu with (1 - nu/k)^k = q.

    Closed form nu = k (1 - q^(1/k)); the unique positive root.
    """
    q = check_probability(q, "q")
    k = check_positive_int(k, "k")
    return k * (1.0 - q ** (1.0 / k))


def gaussian_mass(intervals):
    """Standard Gaussian measure of a disjoint sorted union of intervals."""
    total = 0.0
    prev_end = -np.inf
    for a, b in intervals:
        if not a < b:
            raise ValueError(f"empty or inverted interval [{a}, {b}]")
        if a < prev_end:
            raise ValueError("intervals must be disjoint and sorted")
        prev_end = b
        total += float(ndtr(b) - ndtr(a))
    return total


def symmetric_interval_u():
    """Half-width u with P(|Z| <= u) = 1/2, i.e. the 0.75 normal quantile."""
    return float(ndtri(0.75))


@dataclass(frozen=True)
class BalancedSet:
    """Union of disjoint intervals with standard Gaussian mass 1/2.

    Endpoints may be -inf/inf. Membership treats intervals as [a, b);
    the boundary convention is irrelevant for continuous draws but is
    applied identically at generation and at posterior re-evaluation.
    """

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        mass = gaussian_mass(ivs)
        if abs(mass - 0.5) > BALANCE_TOL:
            raise ValueError(
                f"set has Gaussian mass {mass!r}, not 1/2 within {BALANCE_TOL}"
            )

    @cached_property
    def bounds(self) -> np.ndarray:
        return np.array([e for iv in self.intervals for e in iv])

    def contains(self, z):
        """Vectorized membership of z in the interval union."""
        idx = np.searchsorted(self.bounds, z, side="right")
        return (idx % 2).astype(np.uint8)

    @classmethod
    def parse(cls, text: str) -> "BalancedSet":
        """Parse 'a:b,c:d' with -inf/inf allowed, e.g. '0:inf'."""
        intervals = []
        for part in text.split(","):
            piece = part.strip()
            if not piece:
                continue
            try:
                lo, hi = piece.split(":")
                intervals.append((float(lo), float(hi)))
            except ValueError as exc:
                raise ValueError(f"bad interval {piece!r}; expected 'a:b'") from exc
        if not intervals:
            raise ValueError("no intervals given")
        return cls(tuple(intervals))

    def format(self) -> str:
        return ",".join(f"{a:g}:{b:g}" for a, b in self.intervals)

    @classmethod
    def half_space(cls) -> "BalancedSet":
        return cls(((0.0, np.inf),))

    @classmethod
    def symmetric(cls) -> "BalancedSet":
        u = symmetric_interval_u()
        return cls(((-u, u),))


@dataclass(frozen=True)
class BgtChannel:
    """Bernoulli pooled testing: items join each test with probability nu/k."""

    n_dims: int
    k: int
    q: float

    def __post_init__(self):
        check_positive_int(self.n_dims, "n_dims")
        check_positive_int(self.k, "k")
        object.__setattr__(self, "q", check_probability(self.q, "q"))
        if self.k > self.n_dims:
            raise ValueError("k cannot exceed n_dims")
        nu = self.nu
        if abs((1.0 - nu / self.k) ** self.k - self.q) > NU_RELATIVE_TOL * self.q:
            raise AssertionError("nu calibration out of tolerance")

    @cached_property
    def nu(self) -> float:
        return bgt_solve_nu(self.q, self.k)

    @property
    def p(self) -> float:
        """P(Y = 1): a test is positive unless it misses the whole support."""
        return 1.0 - self.q

    def prior(self) -> KSparsePrior:
        return KSparsePrior(self.n_dims, self.k)

    @property
    def binary_design(self) -> bool:
        return True

    def sample_design(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return (rng.random((n, self.n_dims)) < self.nu / self.k).astype(np.uint8)

    def respond_rows(self, xs: np.ndarray, signal: Signal) -> np.ndarray:
        """y_i = 1(support(x_i) intersects support(signal)) for each row."""
        cols = np.asarray(signal.support, dtype=np.intp)
        return xs[:, cols].any(axis=1).astype(np.uint8)

    # Packed-evaluation interface used by the posterior engine -------------

    def atom_pack(self, prior: KSparsePrior) -> np.ndarray:
        if prior.n_dims != self.n_dims or prior.k != self.k:
            raise ValueError("prior does not match channel dimensions")
        return prior.mask_array

    def row_pack(self, xs: np.ndarray) -> np.ndarray:
        return pack_mask(xs)

    def respond(self, packed_rows: np.ndarray, atom_pack: np.ndarray) -> np.ndarray:
        """(n_rows, n_atoms) response bits from packed rows and atom masks."""
        hit = packed_rows.reshape(-1, 1) & atom_pack.reshape(1, -1)
        return (hit != 0).astype(np.uint8)


@dataclass(frozen=True)
class SbgChannel:
    """Balanced Gaussian channel: y = 1(<x, theta> in region), x ~ N(0, I)."""

    n_dims: int
    k: int
    region: BalancedSet

    def __post_init__(self):
        check_positive_int(self.n_dims, "n_dims")
        check_positive_int(self.k, "k")
        if self.k > self.n_dims:
            raise ValueError("k cannot exceed n_dims")

    @property
    def p(self) -> float:
        """P(Y = 1) = 1/2 because <X, theta> is standard normal and A is balanced."""
        return 0.5

    def prior(self) -> KSparsePrior:
        return KSparsePrior(self.n_dims, self.k)

    @property
    def binary_design(self) -> bool:
        return False

    def sample_design(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.standard_normal((n, self.n_dims))

    def _project(self, xs: np.ndarray, supports: np.ndarray) -> np.ndarray:
        """<x_i, theta_j> for every row i and support row j, shape (n, m)."""
        return xs[:, supports].sum(axis=2) / np.sqrt(self.k)

    def respond_rows(self, xs: np.ndarray, signal: Signal) -> np.ndarray:
        supports = np.asarray([signal.support], dtype=np.intp)
        z = self._project(xs, supports)[:, 0]
        return self.region.contains(z)

    def atom_pack(self, prior: KSparsePrior) -> np.ndarray:
        if prior.n_dims != self.n_dims or prior.k != self.k:
            raise ValueError("prior does not match channel dimensions")
        return prior.support_matrix.astype(np.intp, copy=False)

    def row_pack(self, xs: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(xs, dtype=np.float64)

    def respond(self, packed_rows: np.ndarray, atom_pack: np.ndarray) -> np.ndarray:
        z = self._project(packed_rows.reshape(-1, self.n_dims), atom_pack)
        return self.region.contains(z)


def bgt_apply(x, signal: Signal) -> int:
    """One pooled test: 1 iff the tested group contains a supported index.

    Equivalent to 1(<x, theta> >= 1/sqrt(k)).
    """
    row = np.asarray(x)
    if row.shape != (signal.n_dims,):
        raise ValueError(f"design row must have length {signal.n_dims}, got {row.shape}")
    return int(row[list(signal.support)].any())


def sbg_apply(x, signal: Signal, region: BalancedSet) -> int:
    """One balanced-model observation: 1 iff <x, theta> lands in the region."""
    row = np.asarray(x, dtype=np.float64)
    if row.shape != (signal.n_dims,):
        raise ValueError(f"design row must have length {signal.n_dims}, got {row.shape}")
    z = row[list(signal.support)].sum() / np.sqrt(signal.k)
    return int(region.contains(z))
