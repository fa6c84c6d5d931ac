"""Equi-replicate, equal-block-size incomplete block designs.

Incidence and concurrence matrices, connectivity, the information matrix
``A = I - N N' / (r k)`` and its canonical efficiency factors (the nonzero
eigenvalues of ``A``), plus the balanced incomplete block special case.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._validation import as_square, as_vector
from .exceptions import (
    DesignValidationError,
    DisconnectedDesignError,
    InvalidParametersError,
    NotAContrastError,
    UnequalBlockSizesError,
    UnequalReplicationError,
    ZeroVectorError,
)
from .model import Factor, encode_levels, indicator_matrix
from .spectral import DEFAULT_TOL, eigh, numeric_rank


@dataclass(frozen=True, eq=False)
class BlockDesign:
    """Unit-by-unit assignment of blocks and treatments (0-based codes)."""

    blocks: np.ndarray
    treatments: np.ndarray
    v: int
    b: int
    block_labels: tuple = ()
    treatment_labels: tuple = ()

    def __post_init__(self):
        blocks = np.asarray(self.blocks, dtype=np.intp)
        treatments = np.asarray(self.treatments, dtype=np.intp)
        if blocks.shape != treatments.shape or blocks.ndim != 1 or blocks.size == 0:
            raise DesignValidationError("blocks and treatments must be equal-length, nonempty 1-D")
        if blocks.min() < 0 or blocks.max() >= self.b or treatments.min() < 0 or treatments.max() >= self.v:
            raise DesignValidationError("block or treatment code out of range")
        sizes = np.bincount(blocks, minlength=self.b)
        if np.any(sizes != sizes[0]):
            raise UnequalBlockSizesError(f"block sizes differ: {sorted(set(sizes.tolist()))}")
        reps = np.bincount(treatments, minlength=self.v)
        if np.any(reps != reps[0]):
            raise UnequalReplicationError(f"replications differ: {sorted(set(reps.tolist()))}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "treatments", treatments)
        if not self.block_labels:
            object.__setattr__(self, "block_labels", tuple(range(1, self.b + 1)))
        if not self.treatment_labels:
            object.__setattr__(self, "treatment_labels", tuple(range(1, self.v + 1)))

    @classmethod
    def from_labels(cls, blocks, treatments):
        """Build from arbitrary labels, coded in first-appearance order."""
        bcodes, blabels = encode_levels(list(blocks))
        tcodes, tlabels = encode_levels(list(treatments))
        return cls(bcodes, tcodes, len(tlabels), len(blabels), blabels, tlabels)

    @classmethod
    def from_block_contents(cls, contents):
        """Build from a list of blocks, each a list of 1-based treatment numbers.

        Units are ordered block by block.
        """
        blocks = [j for j, block in enumerate(contents) for _ in block]
        treatments = [t - 1 for block in contents for t in block]
        v = max(treatments) + 1
        return cls(np.array(blocks), np.array(treatments), v, len(contents))

    @property
    def n(self):
        return int(self.blocks.shape[0])

    @property
    def k(self):
        return self.n // self.b

    @property
    def r(self):
        return self.n // self.v

    def block_factor(self, name="block"):
        return Factor(name, self.blocks, self.b, self.block_labels)

    def treatment_factor(self, name="treatment"):
        return Factor(name, self.treatments, self.v, self.treatment_labels)

    def block_term(self, name="block"):
        return indicator_matrix(self.block_factor(name))

    def treatment_term(self, name="treatment"):
        return indicator_matrix(self.treatment_factor(name))

    def same_as(self, other):
        return (
            self.v == other.v
            and self.b == other.b
            and np.array_equal(self.blocks, other.blocks)
            and np.array_equal(self.treatments, other.treatments)
            and tuple(map(str, self.block_labels)) == tuple(map(str, other.block_labels))
            and tuple(map(str, self.treatment_labels)) == tuple(map(str, other.treatment_labels))
        )


@dataclass(frozen=True, eq=False)
class EfficiencyReport:
    cefs: np.ndarray
    contrast_basis: np.ndarray
    E_harmonic: float
    geometric_mean: float
    min_cef: float
    is_bib: bool = False
    lambda_: int = None
    e_bib: Fraction = None

    @property
    def arithmetic_mean(self):
        return float(np.mean(self.cefs))


class BibCheck(NamedTuple):
    lambda_: Fraction
    b: Fraction
    feasible: bool
    e: Fraction


class BibStatus(NamedTuple):
    is_bib: bool
    lambda_: int
    note: str = ""


class EffectVariances(NamedTuple):
    var_matrix: np.ndarray
    pairwise_bib: float


def incidence(design):
    """``N[i, j]`` = number of units in block ``j`` receiving treatment ``i``."""
    n = np.zeros((design.v, design.b))
    np.add.at(n, (design.treatments, design.blocks), 1.0)
    return n


def concurrence(n):
    n = np.asarray(n, dtype=float)
    return n @ n.T


def is_connected(n):
    """Whether the treatment-block incidence graph links every pair of treatments."""
    n = np.asarray(n)
    v, b = n.shape
    adj = np.zeros((v + b, v + b))
    adj[:v, v:] = n > 0
    _, labels = connected_components(csr_matrix(adj), directed=False)
    return bool(np.all(labels[:v] == labels[0]))


def information_matrix(design):
    """``A = I_v - N N' / (r k)``."""
    nn = concurrence(incidence(design))
    a = np.eye(design.v) - nn / (design.r * design.k)
    return (a + a.T) / 2.0


def canonical_efficiency_factors(a, tol=DEFAULT_TOL, design=None):
    """Canonical efficiency factors and their contrast eigenvectors.

    The zero root belonging to the constant vector is dropped; more than one
    zero root means the design is disconnected. Pass ``design`` to fill in
    the BIB fields of the report.
    """
    a = as_square(a, "information matrix")
    v = a.shape[0]
    eig = eigh(a, tol)
    rank = numeric_rank(eig, tol)
    if rank < v - 1:
        raise DisconnectedDesignError(f"information matrix has rank {rank} < v - 1 = {v - 1}")
    cefs = eig.values[: v - 1].copy()
    basis = eig.vectors[:, : v - 1].copy()
    report = dict(
        cefs=cefs,
        contrast_basis=basis,
        E_harmonic=float((v - 1) / np.sum(1.0 / cefs)),
        geometric_mean=float(np.exp(np.mean(np.log(cefs)))),
        min_cef=float(cefs[-1]),
    )
    if design is not None and design.k < design.v:
        status = is_bib(design)
        if status.is_bib:
            e = Fraction(status.lambda_ * design.v, design.r * design.k)
            report.update(is_bib=True, lambda_=status.lambda_, e_bib=e)
    return EfficiencyReport(**report)


def efficiency_report(design, tol=DEFAULT_TOL):
    return canonical_efficiency_factors(information_matrix(design), tol, design=design)


def contrast_efficiency(c, a, tol=DEFAULT_TOL):
    """Efficiency factor ``c'Ac / c'c`` of a treatment contrast."""
    c = as_vector(c, "contrast")
    cc = float(c @ c)
    if cc == 0.0:
        raise ZeroVectorError("contrast vector is zero")
    if abs(c.sum()) > tol.abs_eps * max(1.0, np.sqrt(cc)):
        raise NotAContrastError("coefficients must sum to zero")
    return float(c @ np.asarray(a) @ c) / cc


def bib_check(v, k, r):
    """Necessary conditions for a BIB design with parameters ``(v, k, r)``.

    ``lambda = r (k - 1) / (v - 1)`` and ``b = v r / k`` must be integers and
    ``b >= v``. Passing these does not guarantee that a design exists.
    """
    if not (v >= 2 and 2 <= k <= v and r >= 1):
        raise InvalidParametersError(f"need v >= 2, 2 <= k <= v, r >= 1; got v={v}, k={k}, r={r}")
    lam = Fraction(r * (k - 1), v - 1)
    b = Fraction(v * r, k)
    feasible = lam.denominator == 1 and b.denominator == 1 and b >= v
    e = Fraction(v * (k - 1), k * (v - 1)) if feasible else None
    return BibCheck(lam, b, feasible, e)


def is_bib(design):
    """True, with lambda, iff every pair of treatments concurs equally often."""
    if not design.k < design.v:
        raise InvalidParametersError("BIB recognition needs incomplete blocks (k < v)")
    n = incidence(design)
    if np.any(n > 1):
        return BibStatus(False, None, "design is not binary")
    nn = concurrence(n).astype(np.int64)
    off = nn[~np.eye(design.v, dtype=bool)]
    if np.all(off == off[0]):
        lam = int(off[0])
        expected = (design.r - lam) * np.eye(design.v, dtype=np.int64) + lam
        if np.array_equal(nn, expected):
            return BibStatus(True, lam)
    return BibStatus(False, None, "concurrences are not all equal")


def effect_variances(report, r, sigma2=1.0):
    """Variance matrix of intra-block treatment estimates, ``sigma2/r * sum eta eta' / e``."""
    basis = report.contrast_basis
    var = (sigma2 / r) * (basis / report.cefs) @ basis.T
    var = (var + var.T) / 2.0
    pairwise = 2.0 * sigma2 / (r * float(report.e_bib)) if report.is_bib else None
    return EffectVariances(var, pairwise)


def average_pairwise_variance(var_matrix):
    """Mean of ``Var(t_i - t_j)`` over all unordered treatment pairs."""
    v = var_matrix.shape[0]
    d = np.diag(var_matrix)
    pair = d[:, None] + d[None, :] - 2.0 * var_matrix
    return float(pair[np.triu_indices(v, 1)].mean())
