"""Symmetric eigendecomposition, numeric rank, pseudo-inverses and projectors.

The eigensolver is a cyclic Jacobi method. Rotations on disjoint index pairs
commute, so each sweep is run as ``n - 1`` rounds of a round-robin schedule
in which all disjoint rotations of a round are applied as one matrix product.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import as_matrix, as_square, as_vector, max_abs
from .exceptions import (
    AsymmetricError,
    DesignValidationError,
    DimensionMismatchError,
    NoConvergenceError,
    NumericalError,
)

MAX_SWEEPS = 100


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    Parameters
    ----------
    rel_eps : float
        Relative threshold below which an eigenvalue counts as zero.
    abs_eps : float
        Absolute threshold for matrix identities (idempotency, symmetry, ...).
    """

    rel_eps: float = 1e-10
    abs_eps: float = 1e-9

    def __post_init__(self):
        if not (self.rel_eps > 0 and self.abs_eps > 0):
            raise DesignValidationError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class SymmetricEigen:
    """Eigenvalues sorted descending; ``vectors[:, i]`` belongs to ``values[i]``."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.T


@dataclass(frozen=True, eq=False)
class Projector:
    """Symmetric idempotent matrix together with its rank."""

    matrix: np.ndarray
    rank: int

    @property
    def n(self):
        return self.matrix.shape[0]

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n, n)), 0)

    @classmethod
    def from_matrix(cls, m, tol=DEFAULT_TOL):
        """Validate ``m`` as an orthogonal projector and read its rank off the trace."""
        m = as_square(m, "projector")
        m = (m + m.T) / 2.0
        if max_abs(m @ m - m) > tol.abs_eps:
            raise NumericalError("matrix is not idempotent within tolerance")
        return cls(m, rank_from_trace(m))

    def __add__(self, other):
        return Projector(self.matrix + other.matrix, self.rank + other.rank)

    def __sub__(self, other):
        return Projector(self.matrix - other.matrix, self.rank - other.rank)

    def complement(self):
        """``I - P`` (the sweep operator for this subspace)."""
        return np.eye(self.n) - self.matrix


def rank_from_trace(m, slack=1e-6):
    """Rank of a projector as its rounded trace.

    Raises if the trace is not within ``slack`` of an integer.
    """
    tr = float(np.trace(m))
    rank = int(round(tr))
    if abs(tr - rank) >= slack:
        raise NumericalError(f"projector trace {tr!r} is not integral")
    return rank


def _round_robin(m):
    # circle method: index 0 fixed, others rotate
    idx = list(range(m))
    for _ in range(m - 1):
        yield [(idx[i], idx[m - 1 - i]) for i in range(m // 2)]
        idx = [idx[0], idx[-1]] + idx[1:-1]


def _jacobi(a, conv):
    n = a.shape[0]
    v = np.eye(n)
    schedule = list(_round_robin(n + (n % 2)))
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= conv:
            return np.diag(a).copy(), v
        for pairs in schedule:
            pairs = [(p, q) for p, q in pairs if q < n and p < n]
            p = np.array([min(pq) for pq in pairs])
            q = np.array([max(pq) for pq in pairs])
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            big = np.abs(theta) > 1e150
            safe = np.where(big, 1.0, theta)
            t = np.where(
                big,
                0.5 / np.where(big, theta, 1.0),
                np.sign(safe) / (np.abs(safe) + np.sqrt(safe * safe + 1.0)),
            )
            t = np.where(theta == 0.0, 1.0, t)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rot = np.eye(n)
            rot[p, p] = c
            rot[q, q] = c
            rot[p, q] = s
            rot[q, p] = -s
            a = rot.T @ a @ rot
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ rot
    raise NoConvergenceError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")


def symmetrize(h, tol=DEFAULT_TOL, name="matrix"):
    """Return ``(H + H')/2``; reject asymmetry above ``abs_eps`` (scaled by ``max|H|``)."""
    h = as_square(h, name)
    scale = max(1.0, max_abs(h))
    if max_abs(h - h.T) > tol.abs_eps * scale:
        raise AsymmetricError(f"{name} is not symmetric within tolerance")
    return (h + h.T) / 2.0


def eigh(h, tol=DEFAULT_TOL):
    """Spectral decomposition of a symmetric matrix.

    Returns a :class:`SymmetricEigen` with eigenvalues in descending order.
    Within a cluster of equal eigenvalues the basis is arbitrary but orthonormal.
    """
    h = symmetrize(h, tol)
    n = h.shape[0]
    if n == 0:
        return SymmetricEigen(np.zeros(0), np.zeros((0, 0)))
    norm = float(np.linalg.norm(h))
    if norm == 0.0:
        return SymmetricEigen(np.zeros(n), np.eye(n))
    # tighter than rel_eps so computed zero roots sit far below the rank threshold
    conv = max(1e-3 * tol.rel_eps, 8 * n * np.finfo(float).eps) * norm
    values, vectors = _jacobi(h.copy(), conv)
    order = np.argsort(-values, kind="stable")
    values, vectors = values[order], vectors[:, order]
    # deterministic sign: largest-magnitude component positive
    pivots = vectors[np.argmax(np.abs(vectors), axis=0), np.arange(n)]
    vectors = vectors * np.where(pivots < 0, -1.0, 1.0)
    return SymmetricEigen(values, vectors)


def _nonzero_mask(values, tol):
    if values.size == 0:
        return np.zeros(0, dtype=bool)
    cutoff = tol.rel_eps * max(1.0, float(np.max(np.abs(values))))
    return np.abs(values) > cutoff


def numeric_rank(eig, tol=DEFAULT_TOL):
    """Number of eigenvalues with ``|lambda| > rel_eps * max(1, max|lambda|)``."""
    return int(np.count_nonzero(_nonzero_mask(eig.values, tol)))


def moore_penrose(h, tol=DEFAULT_TOL):
    """Moore-Penrose inverse of a symmetric matrix via its spectral decomposition."""
    eig = h if isinstance(h, SymmetricEigen) else eigh(h, tol)
    mask = _nonzero_mask(eig.values, tol)
    g = eig.vectors[:, mask]
    out = (g / eig.values[mask]) @ g.T
    return (out + out.T) / 2.0


def projector_from_design(x, tol=DEFAULT_TOL):
    """Orthogonal projector ``X (X'X)^+ X'`` onto the column space of ``X``."""
    x = as_matrix(x, "design")
    if x.shape[1] == 0:
        raise DimensionMismatchError("design must have at least one column")
    xtx = x.T @ x
    eig = eigh(xtx, tol)
    p = x @ moore_penrose(eig, tol) @ x.T
    p = (p + p.T) / 2.0
    rank = numeric_rank(eig, tol)
    if abs(np.trace(p) - rank) > max(tol.abs_eps, 1e-6):
        raise NumericalError("projector trace disagrees with numeric rank of X'X")
    return Projector(p, rank)


def gauss_markov_excess(x, m, gamma, tol=DEFAULT_TOL):
    """Variance excess of an alternative unbiased linear estimator over least squares.

    The competing estimator uses ``L = G X' + M (I - P)`` with ``G = (X'X)^+``
    and ``P = X G X'``; the return value is ``g'(XL)(XL)'g - g'Pg`` and is
    nonnegative up to rounding.
    """
    x = as_matrix(x, "X")
    m = as_matrix(m, "M")
    gamma = as_vector(gamma, "gamma")
    n, p = x.shape
    if m.shape != (p, n):
        raise DimensionMismatchError(f"M must have shape {(p, n)}, got {m.shape}")
    if gamma.shape[0] != n:
        raise DimensionMismatchError(f"gamma must have length {n}")
    g = moore_penrose(x.T @ x, tol)
    proj = x @ g @ x.T
    xl = proj + x @ m @ (np.eye(n) - proj)
    w = xl.T @ gamma
    return float(w @ w - gamma @ proj @ gamma)
