"""Array coercion helpers shared by every module."""

import numpy as np

from .exceptions import DesignValidationError, DimensionMismatchError, NonSquareError


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array (a copy is not forced)."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DesignValidationError(f"{name} contains NaN or infinite entries")
    return arr


def as_vector(a, name="vector"):
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise DesignValidationError(f"{name} contains NaN or infinite entries")
    return arr


def as_square(a, name="matrix"):
    arr = as_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise NonSquareError(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_length(vec, n, name="vector"):
    if vec.shape[0] != n:
        raise DimensionMismatchError(f"{name} has length {vec.shape[0]}, expected {n}")


def max_abs(a):
    """Infinity-style max-abs norm; 0.0 for empty input."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0
