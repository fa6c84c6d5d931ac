"""Analysis of variance tables built from sequential sweep results."""

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_matrix, as_vector
from .exceptions import (
    DimensionMismatchError,
    DisconnectedDesignError,
    InvalidDfError,
    NegativeSSError,
    NumericalError,
    ZeroDfError,
    ZeroResidualVarianceError,
)
from .fdist import f_upper_tail
from .spectral import DEFAULT_TOL, rank_from_trace

ADDITIVITY_RTOL = 1e-8


@dataclass
class AnovaRow:
    source: str
    df: int
    ss: float
    ms: float = None
    f: float = None
    p: float = None

    def to_dict(self):
        return {"source": self.source, "df": self.df, "ss": self.ss, "ms": self.ms, "f": self.f, "p": self.p}


@dataclass
class AnovaTable:
    strata: list
    total: AnovaRow
    diagnostics: list = field(default_factory=list)

    @property
    def rows(self):
        return [row for _, rows in self.strata for row in rows]

    def row(self, source):
        for r in self.rows:
            if r.source == source:
                return r
        raise KeyError(source)

    @property
    def residual(self):
        return self.rows[-1]

    def to_dict(self):
        out = []
        for label, rows in self.strata:
            for r in rows:
                out.append({"stratum": label, **r.to_dict()})
        out.append({"stratum": None, **self.total.to_dict()})
        return out


def residual_mean_square(rss, df):
    if df < 1:
        raise ZeroDfError("residual mean square needs at least one residual df")
    return rss / df


def variance_ratio(model_ss, model_df, s2):
    if model_df < 1:
        raise InvalidDfError("variance ratio needs at least one model df")
    if not s2 > 0:
        raise ZeroResidualVarianceError("residual mean square is zero")
    return (model_ss / model_df) / s2


def expected_ss(pstar, x, pi, sigma2):
    """Expectation of ``y' P* y`` under ``y ~ (X pi, sigma2 I)``: ``pi'X'P*X pi + q* sigma2``."""
    x = as_matrix(x, "X")
    pi = as_vector(pi, "pi")
    if x.shape[0] != pstar.n or x.shape[1] != pi.shape[0]:
        raise DimensionMismatchError("incompatible dimensions for expected_ss")
    mean = x @ pi
    return float(mean @ pstar.matrix @ mean + pstar.rank * sigma2)


def _labels(names):
    d = len(names)
    out = []
    for i, name in enumerate(names):
        adj, ig = names[:i], names[i + 1 :]
        parts = []
        if adj:
            parts.append("adj. " + ", ".join(adj))
        if ig:
            parts.append("ig. " + ", ".join(ig))
        out.append(f"{name} ({'; '.join(parts)})" if d > 1 else name)
    return out


def _clean_ss(ss, scale, tol, source, diagnostics):
    if ss >= 0:
        return ss
    if ss >= -tol.abs_eps * scale:
        diagnostics.append(f"{source}: clamped tiny negative SS {ss:.3g} to 0")
        return 0.0
    raise NegativeSSError(f"{source}: negative sum of squares {ss!r}")


def build_table(sweep, ystar, names=None, layout="units", tol=DEFAULT_TOL, allow_disconnected=False):
    """Assemble a sequential (ignoring / adjusted) ANOVA table.

    Parameters
    ----------
    sweep : SweepResult
        Output of :func:`sequential_sweep` on mean-centred data.
    ystar : array
        The mean-centred response the sweep was run on.
    names : sequence of str, optional
        Term names; defaults to the names carried by the fits.
    layout : {"units", "blocks"}
        ``"units"`` puts every term in a single stratum with F tests on each.
        ``"blocks"`` puts the first term in a blocks stratum and the remaining
        terms, with the F tests, in the blocks.plots stratum.
    allow_disconnected : bool
        When the second term of a blocks layout has lost rank (disconnected
        design), omit F and p instead of raising.
    """
    ystar = as_vector(ystar, "ystar")
    fits = sweep.fits
    n = ystar.shape[0]
    names = list(names) if names is not None else [f.name or f"F{i + 1}" for i, f in enumerate(fits)]
    if len(names) != len(fits):
        raise DimensionMismatchError("one name per term required")
    if layout not in ("units", "blocks"):
        raise ValueError(f"unknown layout {layout!r}")
    if layout == "blocks" and len(fits) < 2:
        raise DimensionMismatchError("blocks layout needs a block term and at least one treatment term")

    diagnostics = []
    total_ss = float(ystar @ ystar)
    scale = max(1.0, total_ss)

    res_df = rank_from_trace(np.eye(n) - sweep.accumulated.matrix)
    if res_df + sum(f.df for f in fits) != n - 1:
        raise NumericalError("degrees of freedom do not add up to n - 1")
    res_ss = float(sweep.residual @ sweep.residual)

    model_rows = []
    for fit, label in zip(fits, _labels(names) if layout == "units" else [None] * len(fits)):
        model_rows.append(AnovaRow(label, fit.df, _clean_ss(fit.ss_adjusted, scale, tol, label or fit.name, diagnostics)))
    residual = AnovaRow("Residual", res_df, _clean_ss(res_ss, scale, tol, "Residual", diagnostics))

    if abs(sum(r.ss for r in model_rows) + residual.ss - total_ss) > ADDITIVITY_RTOL * scale:
        raise NumericalError("sums of squares do not add up to the corrected total")

    for r in model_rows + [residual]:
        if r.df > 0:
            r.ms = r.ss / r.df

    tested = model_rows if layout == "units" else model_rows[1:]
    refuse = False
    if layout == "blocks" and not fits[1].full_rank:
        if not allow_disconnected:
            raise DisconnectedDesignError("design is disconnected; treatment contrasts are not all estimable")
        diagnostics.append("disconnected design: F tests omitted")
        refuse = True
    if res_df == 0:
        diagnostics.append("no residual degrees of freedom: F tests omitted")
        refuse = True
    elif residual.ms <= tol.abs_eps * scale / res_df:
        diagnostics.append("residual mean square is zero: F tests omitted")
        refuse = True
    if not refuse:
        for r in tested:
            if r.df > 0:
                r.f = variance_ratio(r.ss, r.df, residual.ms)
                r.p = f_upper_tail(r.f, r.df, res_df)

    if layout == "units":
        strata = [("Units stratum", model_rows + [residual])]
    else:
        model_rows[0].source = "Total"
        for r, name in zip(model_rows[1:], names[1:]):
            r.source = f"{name} (adj.)"
        strata = [("Blocks stratum", model_rows[:1]), ("Blocks.plots stratum", model_rows[1:] + [residual])]

    total = AnovaRow("Grand Total", n - 1, total_ss)
    return AnovaTable(strata, total, diagnostics)
