"""Reduced designs, reduced normal equations and sweep-operator factorizations.

A sweep operator is ``I - P`` for an orthogonal projector ``P``. Eliminating
one factor from the normal equations of another amounts to replacing the
second factor's design ``X`` by ``(I - P_prior) X``; solving the reduced
system then gives effects adjusted for everything in ``P_prior``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import as_matrix, as_vector, check_length, max_abs
from .exceptions import (
    DimensionMismatchError,
    EfficiencyOutOfRangeError,
    EmptyVectorError,
    NotOrthogonalComponentsError,
    NumericalError,
)
from .model import ModelTerm, grand_mean_projector
from .spectral import DEFAULT_TOL, Projector, eigh, moore_penrose, numeric_rank


@dataclass(frozen=True, eq=False)
class ReducedDesign:
    matrix: np.ndarray
    prior: Projector
    name: str = ""
    labels: tuple = ()


@dataclass(frozen=True, eq=False)
class FitResult:
    """Solution of one set of reduced normal equations.

    ``full_rank`` is False when the reduced system lost more than the single
    sum-to-zero direction, e.g. treatments in a disconnected block design.
    """

    effects: np.ndarray
    fitted: np.ndarray
    ss_adjusted: float
    df: int
    projector: Projector
    full_rank: bool = True
    name: str = ""
    labels: tuple = ()


class SweepResult(NamedTuple):
    fits: list
    residual: np.ndarray
    accumulated: Projector


def reduce(term, prior):
    """Project the columns of a design onto the orthogonal complement of ``prior``."""
    if isinstance(term, ModelTerm):
        x, name, labels = term.design, term.factor_name, term.labels
    else:
        x, name, labels = as_matrix(term, "design"), "", ()
    if x.shape[0] != prior.n:
        raise DimensionMismatchError(
            f"design has {x.shape[0]} rows but prior projector has order {prior.n}"
        )
    return ReducedDesign(x - prior.matrix @ x, prior, name, labels)


def solve_reduced(reduced, ystar, tol=DEFAULT_TOL):
    """Solve ``X~'X~ t = X~' y*`` with the Moore-Penrose inverse.

    Effects are reported centred to sum zero. The adjusted sum of squares is
    ``y*' P~ y*`` where ``P~ = X~ (X~'X~)^+ X~'``.
    """
    xt = reduced.matrix
    ystar = as_vector(ystar, "ystar")
    check_length(ystar, xt.shape[0], "ystar")
    info = xt.T @ xt
    eig = eigh(info, tol)
    ginv = moore_penrose(eig, tol)
    df = numeric_rank(eig, tol)
    effects = ginv @ (xt.T @ ystar)
    effects = effects - effects.mean()
    proj = xt @ ginv @ xt.T
    proj = (proj + proj.T) / 2.0
    fitted = proj @ ystar
    return FitResult(
        effects=effects,
        fitted=fitted,
        ss_adjusted=float(ystar @ fitted),
        df=df,
        projector=Projector(proj, df),
        full_rank=df >= xt.shape[1] - 1,
        name=reduced.name,
        labels=reduced.labels,
    )


def residual_operator(pb, pt_adj, tol=DEFAULT_TOL):
    """``I - P_B - P~_T``, checked against its two-sweep factorization."""
    if pb.n != pt_adj.n:
        raise DimensionMismatchError("projectors have different orders")
    if max_abs(pt_adj.matrix @ pb.matrix) > tol.abs_eps:
        raise NotOrthogonalComponentsError("adjusted projector is not orthogonal to P_B")
    eye = np.eye(pb.n)
    r = eye - pb.matrix - pt_adj.matrix
    factored = (eye - pt_adj.matrix) @ (eye - pb.matrix)
    if max_abs(r - factored) > tol.abs_eps:
        raise NumericalError("residual operator does not factor into two sweeps")
    return r


def bib_three_stage(pb, pt, e, y, tol=DEFAULT_TOL):
    """Residuals of a BIB design by a block sweep, an augmented treatment sweep
    (``I - P_T / e``) and a second block sweep.

    The caller is responsible for the design actually being a BIB with
    efficiency factor ``e``; otherwise the result is not the residual vector.
    """
    if not 0.0 < e <= 1.0:
        raise EfficiencyOutOfRangeError(f"efficiency factor must lie in (0, 1], got {e}")
    y = as_vector(y, "y")
    check_length(y, pb.n, "y")
    if pt.n != pb.n:
        raise DimensionMismatchError("projectors have different orders")
    w = y - pb.matrix @ y
    w = w - (pt.matrix @ w) / e
    return w - pb.matrix @ w


def sequential_sweep(terms, ystar, tol=DEFAULT_TOL, prior=None):
    """Fit terms in order, each adjusted for the mean and all earlier terms.

    ``prior`` defaults to the grand-mean projector, so the first term is
    fitted after the mean and every reported df counts contrasts only.
    The total corrected SS splits as ``sum(fit.ss_adjusted) + |residual|^2``.
    """
    ystar = as_vector(ystar, "ystar")
    if len(terms) == 0:
        raise EmptyVectorError("sequential_sweep needs at least one term")
    n = ystar.shape[0]
    acc = grand_mean_projector(n) if prior is None else prior
    fits = []
    for term in terms:
        fit = solve_reduced(reduce(term, acc), ystar, tol)
        fits.append(fit)
        acc = acc + fit.projector
    residual = ystar - sum(f.fitted for f in fits)
    return SweepResult(fits, residual, acc)
