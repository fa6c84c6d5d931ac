"""scikit-learn compatible wrappers around the sweep analysis.

``X`` holds one column of level labels per factor, in fitting order; ``y``
is the response. Labels may be strings or numbers.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .anova import build_table
from .design import BlockDesign, efficiency_report, incidence, is_connected
from .exceptions import DisconnectedDesignError
from .model import Factor, indicator_matrix, sweep_mean
from .spectral import Tolerance, moore_penrose
from .sweep import sequential_sweep


class SweepANOVA(RegressorMixin, BaseEstimator):
    """Main-effects linear model fitted by sequential sweeps.

    Each column of ``X`` is adjusted for the mean and for all columns to its
    left and ignores those to its right, giving sequential sums of squares.

    Parameters
    ----------
    factor_names : sequence of str, optional
        Names used in the ANOVA table; defaults to ``F1, F2, ...``.
    rel_eps, abs_eps : float
        Zero-eigenvalue and matrix-identity thresholds.

    Attributes
    ----------
    anova_table_ : AnovaTable
    effects_ : list of ndarray
        Sum-to-zero effects of each factor, adjusted for earlier factors.
    levels_ : list of tuple
        Level labels per factor in first-appearance order.
    residuals_ : ndarray
    intercept_ : float
        Grand mean of ``y``.
    """

    _layout = "units"

    def __init__(self, factor_names=None, rel_eps=1e-10, abs_eps=1e-9):
        self.factor_names = factor_names
        self.rel_eps = rel_eps
        self.abs_eps = abs_eps

    def _tol(self):
        return Tolerance(self.rel_eps, self.abs_eps)

    def _names(self, d):
        if self.factor_names is None:
            return [f"F{i + 1}" for i in range(d)]
        names = list(self.factor_names)
        if len(names) != d:
            raise ValueError(f"factor_names has {len(names)} entries but X has {d} columns")
        return names

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=None, y_numeric=True)
        y = y.astype(np.float64)
        tol = self._tol()
        names = self._names(X.shape[1])
        self.n_features_in_ = X.shape[1]
        factors = [Factor.from_values(name, X[:, j].tolist()) for j, name in enumerate(names)]
        terms = [indicator_matrix(f) for f in factors]
        self._check_design(X, factors)

        ystar = sweep_mean(y)
        sweep = sequential_sweep(terms, ystar, tol)
        self.anova_table_ = build_table(sweep, ystar, names, layout=self._layout, tol=tol)
        self.effects_ = [f.effects for f in sweep.fits]
        self.levels_ = [f.labels for f in factors]
        self.residuals_ = sweep.residual
        self.intercept_ = float(y.mean())

        # full parameter vector (Moore-Penrose solution) for prediction
        w = np.hstack([np.ones((len(y), 1))] + [t.design for t in terms])
        self.coef_ = moore_penrose(w.T @ w, tol) @ (w.T @ y)
        return self

    def _check_design(self, X, factors):
        pass

    def _row_design(self, X):
        cols = [np.ones((X.shape[0], 1))]
        for j, labels in enumerate(self.levels_):
            index = {lab: i for i, lab in enumerate(labels)}
            block = np.zeros((X.shape[0], len(labels)))
            for h, lab in enumerate(X[:, j].tolist()):
                if lab not in index:
                    raise ValueError(f"unseen level {lab!r} in column {j}")
                block[h, index[lab]] = 1.0
            cols.append(block)
        return np.hstack(cols)

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=None)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        return self._row_design(X) @ self.coef_


class IntraBlockANOVA(SweepANOVA):
    """Intra-block analysis of an equi-replicate incomplete block design.

    ``X`` has exactly two columns, block then treatment. Besides the
    attributes of :class:`SweepANOVA` the fitted estimator exposes
    ``design_`` (a :class:`BlockDesign`), ``efficiency_`` (an
    :class:`EfficiencyReport`) and ``treatment_effects_`` keyed by label.
    """

    _layout = "blocks"

    def __init__(self, factor_names=("block", "treatment"), rel_eps=1e-10, abs_eps=1e-9):
        super().__init__(factor_names=factor_names, rel_eps=rel_eps, abs_eps=abs_eps)

    def _check_design(self, X, factors):
        if X.shape[1] != 2:
            raise ValueError("IntraBlockANOVA expects two columns: block, treatment")
        self.design_ = BlockDesign.from_labels(X[:, 0].tolist(), X[:, 1].tolist())
        if not is_connected(incidence(self.design_)):
            raise DisconnectedDesignError("design is disconnected")

    def fit(self, X, y):
        super().fit(X, y)
        self.efficiency_ = efficiency_report(self.design_, self._tol())
        self.treatment_effects_ = dict(zip(self.levels_[1], self.effects_[1].tolist()))
        return self
