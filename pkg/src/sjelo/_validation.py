"""Input checks shared by the rating modules."""

import numpy as np


def check_results(p, name="p"):
    """Return ``p`` as a float ndarray after checking it is a result matrix.

    A result matrix is square, finite, non-negative and has a zero diagonal.
    """
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError(f"{name} must have at least one player")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        raise ValueError(f"{name} contains negative points")
    if np.any(np.diag(arr) != 0):
        raise ValueError(f"{name} must have a zero diagonal")
    return arr


def check_rating(x, n=None, name="x"):
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a vector, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"{name} has {arr.shape[0]} entries, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_positive(value, name):
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


def sum_tolerance(n):
    """Numerical slack allowed on the zero-sum constraint of an n-vector."""
    return n * 1e-12
