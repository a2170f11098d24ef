"""Uniform prior over k-sparse binary unit-sphere signals.

A signal is a size-k subset of {0, ..., N-1}; every supported coordinate
carries the value 1/sqrt(k), so each signal has unit norm and the inner
product of two signals is (shared support)/k, always nonnegative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

import numpy as np

from ._validation import check_positive_int

DEFAULT_ENUMERATION_BUDGET = 2_000_000

# Packed word masks are only available at machine-word dimension.
MASK_DIM_LIMIT = 64


class BudgetExceededError(RuntimeError):
    """Raised when enumerating a prior would exceed the atom budget."""


@dataclass(frozen=True)
class Signal:
    """One k-sparse support; nonzero coordinates implicitly equal 1/sqrt(k)."""

    n_dims: int
    support: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.support)) != len(self.support):
            raise ValueError("support indices must be distinct")
        if self.support and not (0 <= min(self.support) <= max(self.support) < self.n_dims):
            raise ValueError("support indices must lie in [0, n_dims)")
        if tuple(sorted(self.support)) != self.support:
            object.__setattr__(self, "support", tuple(sorted(self.support)))

    @property
    def k(self) -> int:
        return len(self.support)

    @cached_property
    def mask(self) -> int:
        """Support as a packed bit mask (bit j set iff j is in the support)."""
        m = 0
        for j in self.support:
            m |= 1 << j
        return m

    def vector(self) -> np.ndarray:
        v = np.zeros(self.n_dims)
        v[list(self.support)] = 1.0 / np.sqrt(self.k)
        return v


def overlap(a: Signal, b: Signal) -> Fraction:
    """Inner product of two signals from the same prior, exact as l/k."""
    if a.k != b.k or a.n_dims != b.n_dims:
        raise ValueError(
            f"signals come from different priors: "
            f"(N={a.n_dims}, k={a.k}) vs (N={b.n_dims}, k={b.k})"
        )
    shared = len(set(a.support) & set(b.support))
    return Fraction(shared, a.k)


@dataclass(frozen=True)
class KSparsePrior:
    """Uniform measure on the C(N, k) binary k-sparse unit-sphere signals."""

    n_dims: int
    k: int

    def __post_init__(self):
        check_positive_int(self.n_dims, "n_dims")
        check_positive_int(self.k, "k")
        if not 1 <= self.k <= self.n_dims:
            raise ValueError(f"need 1 <= k <= n_dims, got k={self.k}, n_dims={self.n_dims}")

    @cached_property
    def n_atoms(self) -> int:
        """Exact cardinality C(N, k) as a Python integer."""
        return comb(self.n_dims, self.k)

    @property
    def degenerate(self) -> bool:
        """k = N is allowed but the prior has a single atom (zero entropy)."""
        return self.k == self.n_dims

    def require_within_budget(self, budget=DEFAULT_ENUMERATION_BUDGET):
        if self.n_atoms > budget:
            raise BudgetExceededError(
                f"C({self.n_dims}, {self.k}) = {self.n_atoms} atoms exceeds the "
                f"enumeration budget of {budget}"
            )

    def enumerate(self, budget=DEFAULT_ENUMERATION_BUDGET):
        """Yield every signal exactly once, supports in lexicographic order."""
        self.require_within_budget(budget)
        for support in itertools.combinations(range(self.n_dims), self.k):
            yield Signal(self.n_dims, support)

    @cached_property
    def support_matrix(self) -> np.ndarray:
        """All supports as an (n_atoms, k) int32 matrix, lexicographic rows."""
        self.require_within_budget()
        flat = np.fromiter(
            itertools.chain.from_iterable(
                itertools.combinations(range(self.n_dims), self.k)
            ),
            dtype=np.int32,
            count=self.n_atoms * self.k,
        )
        return flat.reshape(self.n_atoms, self.k)

    @cached_property
    def mask_array(self) -> np.ndarray:
        """Supports packed into uint64 word masks (requires N <= 64)."""
        if self.n_dims > MASK_DIM_LIMIT:
            raise ValueError(f"word masks need n_dims <= {MASK_DIM_LIMIT}")
        bits = np.uint64(1) << self.support_matrix.astype(np.uint64)
        return bits.sum(axis=1, dtype=np.uint64)

    def signal(self, support) -> Signal:
        sig = Signal(self.n_dims, tuple(int(j) for j in support))
        if sig.k != self.k:
            raise ValueError(f"support size {sig.k} does not match prior k={self.k}")
        return sig

    def sample_signal(self, rng: np.random.Generator) -> Signal:
        support = np.sort(rng.choice(self.n_dims, size=self.k, replace=False))
        return Signal(self.n_dims, tuple(int(j) for j in support))


def pack_mask(row: np.ndarray) -> np.ndarray:
    """Pack 0/1 rows of width <= 64 into uint64 masks (vectorized over rows)."""
    bits = np.asarray(row, dtype=np.uint64)
    if bits.ndim == 1:
        bits = bits.reshape(1, -1)
    n_dims = bits.shape[1]
    if n_dims > MASK_DIM_LIMIT:
        raise ValueError(f"word masks need width <= {MASK_DIM_LIMIT}")
    weights = np.uint64(1) << np.arange(n_dims, dtype=np.uint64)
    return (bits * weights).sum(axis=1, dtype=np.uint64)
