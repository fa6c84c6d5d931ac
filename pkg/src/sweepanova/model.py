"""Factors, indicator design matrices and projector predicates."""

from dataclasses import dataclass

import numpy as np

from ._validation import as_matrix, as_vector, max_abs
from .exceptions import (
    DimensionMismatchError,
    EmptyVectorError,
    LevelOutOfRangeError,
    ZeroUnitsError,
)
from .spectral import DEFAULT_TOL, Projector, projector_from_design


def encode_levels(values):
    """Map arbitrary labels to integer codes in first-appearance order.

    Returns ``(codes, labels)`` where ``labels[codes[h]] == values[h]``.
    """
    labels = []
    index = {}
    codes = np.empty(len(values), dtype=np.intp)
    for h, value in enumerate(values):
        if value not in index:
            index[value] = len(labels)
            labels.append(value)
        codes[h] = index[value]
    return codes, tuple(labels)


@dataclass(frozen=True, eq=False)
class Factor:
    """A classification of the units.

    ``levels`` holds 0-based level codes, one per unit; ``labels`` names
    each code for reporting.
    """

    name: str
    levels: np.ndarray
    num_levels: int
    labels: tuple = ()

    def __post_init__(self):
        levels = np.asarray(self.levels)
        if levels.ndim != 1:
            raise DimensionMismatchError(f"factor {self.name!r}: levels must be 1-D")
        if levels.size and (levels.min() < 0 or levels.max() >= self.num_levels):
            raise LevelOutOfRangeError(
                f"factor {self.name!r}: level codes must lie in 0..{self.num_levels - 1}"
            )
        object.__setattr__(self, "levels", levels.astype(np.intp))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(1, self.num_levels + 1)))

    @classmethod
    def from_values(cls, name, values):
        codes, labels = encode_levels(list(values))
        return cls(name, codes, len(labels), labels)

    def __len__(self):
        return int(self.levels.shape[0])


@dataclass(frozen=True, eq=False)
class UnitTable:
    n: int
    factors: tuple
    response: np.ndarray = None

    def __post_init__(self):
        for f in self.factors:
            if len(f) != self.n:
                raise DimensionMismatchError(
                    f"factor {f.name!r} has {len(f)} units, expected {self.n}"
                )
        if self.response is not None:
            y = as_vector(self.response, "response")
            if y.shape[0] != self.n:
                raise DimensionMismatchError(f"response has length {y.shape[0]}, expected {self.n}")
            object.__setattr__(self, "response", y)

    def factor(self, name):
        for f in self.factors:
            if f.name == name:
                return f
        raise KeyError(name)


@dataclass(frozen=True, eq=False)
class ModelTerm:
    factor_name: str
    design: np.ndarray
    labels: tuple = ()

    @property
    def n(self):
        return self.design.shape[0]

    @property
    def num_levels(self):
        return self.design.shape[1]


def indicator_matrix(factor, n=None):
    """0/1 design matrix of a factor: entry ``[h, j]`` is 1 iff unit ``h`` has level ``j``."""
    n = len(factor) if n is None else n
    if len(factor) != n:
        raise DimensionMismatchError(f"factor {factor.name!r} has {len(factor)} units, expected {n}")
    x = np.zeros((n, factor.num_levels))
    x[np.arange(n), factor.levels] = 1.0
    return ModelTerm(factor.name, x, factor.labels)


def _design(term):
    return term.design if isinstance(term, ModelTerm) else as_matrix(term, "design")


def grand_mean_projector(n):
    """``J_n / n``, the projector onto the constant vectors."""
    if n < 1:
        raise ZeroUnitsError("grand mean projector needs at least one unit")
    return Projector(np.full((n, n), 1.0 / n), 1)


def sweep_mean(y):
    """Subtract the grand mean: ``(I - J/n) y``."""
    y = as_vector(y, "y")
    if y.size == 0:
        raise EmptyVectorError("cannot sweep the mean of an empty vector")
    return y - y.mean()


def is_marginal(x1, x2, tol=DEFAULT_TOL):
    """True iff the column space of ``x1`` lies inside that of ``x2``."""
    a, b = _design(x1), _design(x2)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatchError("terms have different numbers of units")
    p2 = projector_from_design(b, tol).matrix
    return max_abs(p2 @ a - a) <= tol.abs_eps


def is_orthogonal(p1, p2, pg, tol=DEFAULT_TOL):
    """True iff ``P1 P2 = P2 P1 = P_G`` (factors orthogonal after the mean)."""
    if not p1.n == p2.n == pg.n:
        raise DimensionMismatchError("projectors have different orders")
    return (
        max_abs(p1.matrix @ p2.matrix - pg.matrix) <= tol.abs_eps
        and max_abs(p2.matrix @ p1.matrix - pg.matrix) <= tol.abs_eps
    )
