"""Input validation helpers shared by the estimator API and the channel layer."""

from __future__ import annotations

import numpy as np


def check_probability(value, name, *, open_interval=True):
    """Validate a scalar probability, returning it as a float."""
    p = float(value)
    if not np.isfinite(p):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if open_interval:
        if not 0.0 < p < 1.0:
            raise ValueError(f"{name} must lie in the open interval (0, 1), got {p}")
    elif not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


def check_positive_int(value, name, *, minimum=1):
    v = int(value)
    if v != value or v < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return v


def check_seed(value, name="seed"):
    s = int(value)
    if s != value or s < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
    return s


def check_design_matrix(X, n_dims, *, binary):
    """Coerce a design matrix to (n, n_dims), binary uint8 or float64 rows."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != n_dims:
        raise ValueError(
            f"design matrix must have shape (n, {n_dims}), got {arr.shape}"
        )
    if binary:
        out = arr.astype(np.uint8, copy=False)
        if not np.array_equal(out, arr):
            raise ValueError("design rows for a pooled-test channel must be 0/1")
        if out.size and out.max() > 1:
            raise ValueError("design rows for a pooled-test channel must be 0/1")
        return out
    return np.ascontiguousarray(arr, dtype=np.float64)


def check_binary_targets(y, n_rows):
    arr = np.asarray(y)
    if arr.shape != (n_rows,):
        raise ValueError(f"targets must have shape ({n_rows},), got {arr.shape}")
    out = arr.astype(np.uint8, copy=False)
    if out.size and out.max() > 1:
        raise ValueError("targets must be 0/1 bits")
    return out


def check_is_fitted(estimator, attribute="state_"):
    if not hasattr(estimator, attribute):
        raise RuntimeError(
            f"{type(estimator).__name__} is not fitted; call fit(X, y) first"
        )
