"""Comparison estimators: least squares, AIC subset selection and the oracle."""

from itertools import combinations

import numpy as np

from ._linalg import spd_solve
from .design import standardize
from .errors import SingularSystemError, ValidationError
from .solver import _package

LS_ZERO_BAND = 1e-5
EXHAUSTIVE_MAX_P = 15


class _Fixed:
    # stands in for PenaltyParams on unpenalized fits
    lam = 0.0
    a = float("nan")


def _ols_on(d, s, columns, estimator):
    b = np.zeros(s.p)
    columns = list(columns)
    if columns:
        X1 = s.Xs[:, columns]
        b[columns] = spd_solve(X1.T @ X1, X1.T @ s.ys, what="design Gram")
    return _package(d, s, b, iterations=0, is_converged=True, xi=0.0, params=_Fixed,
                    trace=(), estimator=estimator)


def count_zeros(fit, indices, band=0.0):
    """Number of ``fit.coefficients[indices]`` with ``|coef| <= band``."""
    c = np.abs(np.asarray(fit.coefficients)[list(indices)])
    return int(np.sum(c <= band))


def ls_estimator(d):
    """Least squares on every covariate.

    Zero-counting for this estimator uses ``count_zeros(fit, idx, LS_ZERO_BAND)``;
    the stored coefficients are untouched.
    """
    s = standardize(d)
    return _ols_on(d, s, range(s.p), "LS")


def oracle_estimator(d, true_support):
    """Least squares restricted to the known nonzero columns."""
    if true_support.p != d.p:
        raise ValidationError(f"support split covers {true_support.p} covariates, data has {d.p}")
    s = standardize(d)
    return _ols_on(d, s, true_support.nonzero_indices, "ORA")


def aic(rss, n, k):
    return n * np.log(rss / n) + 2.0 * k


class _SubsetScorer:
    def __init__(self, s):
        self.G = s.Xs.T @ s.Xs
        self.c = s.Xs.T @ s.ys
        self.yy = float(s.ys @ s.ys)
        self.n = s.n

    def __call__(self, subset):
        subset = list(subset)
        if not subset:
            return aic(self.yy, self.n, 0)
        c = self.c[subset]
        try:
            coef = spd_solve(self.G[np.ix_(subset, subset)], c, what="subset Gram")
        except SingularSystemError:
            return np.inf
        rss = self.yy - float(c @ coef)
        if not rss > 0:
            return -np.inf if rss == 0 else np.inf
        return aic(rss, self.n, len(subset))


def best_subset_exhaustive(s):
    """Subset minimizing ``n log(RSS/n) + 2k`` over all ``2**p`` subsets.

    Ties go to the smaller subset, then to the lexicographically first one.
    Returns ``(subset, aic)``.
    """
    score = _SubsetScorer(s)
    best, best_val = (), score(())
    for k in range(1, s.p + 1):
        for subset in combinations(range(s.p), k):
            v = score(subset)
            if v < best_val:
                best, best_val = subset, v
    return best, best_val


def best_subset_stepwise(s):
    """Forward selection with a backward-elimination pass after each addition.

    Stops when neither adding nor removing a covariate lowers AIC.
    Returns ``(subset, aic)``.
    """
    score = _SubsetScorer(s)
    current = set()
    current_val = score(())
    while True:
        moved = False
        adds = [(score(sorted(current | {j})), j) for j in range(s.p) if j not in current]
        if adds:
            val, j = min(adds)
            if val < current_val:
                current.add(j)
                current_val = val
                moved = True
        while len(current) > 1:
            drops = [(score(sorted(current - {j})), j) for j in sorted(current)]
            val, j = min(drops)
            if val < current_val:
                current.discard(j)
                current_val = val
                moved = True
            else:
                break
        if not moved:
            return tuple(sorted(current)), current_val


def aic_estimator(d, search=None):
    """Least squares on the AIC-selected subset.

    ``search`` is ``"exhaustive"``, ``"stepwise"`` or ``None`` for exhaustive
    when ``p <= 15`` and stepwise otherwise. The data are centered, so no
    intercept parameter is counted.
    """
    s = standardize(d)
    if search is None:
        search = "exhaustive" if s.p <= EXHAUSTIVE_MAX_P else "stepwise"
    if search == "exhaustive":
        subset, _ = best_subset_exhaustive(s)
    elif search == "stepwise":
        subset, _ = best_subset_stepwise(s)
    else:
        raise ValidationError(f"unknown AIC search {search!r}")
    return _ols_on(d, s, subset, "AIC")
