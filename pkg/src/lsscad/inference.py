"""Sandwich standard errors for the selected coefficients."""

from dataclasses import dataclass
import warnings

import numpy as np

from ._linalg import spd_inverse
from .errors import EmptySupportError
from .penalty import PenaltyParams, penalty_right_derivative


@dataclass(frozen=True)
class CovarianceEstimate:
    """Covariance of the selected coefficients.

    ``cov_std``/``se_std`` are on the standardized scale, ``cov``/``se`` on
    the original one. ``indices`` are the selected covariate positions.
    """

    indices: tuple
    cov_std: np.ndarray
    se_std: np.ndarray
    cov: np.ndarray
    se: np.ndarray
    clipped: bool = False


def _selected(fit, s):
    sel = list(fit.support.nonzero_indices)
    if not sel:
        raise EmptySupportError("no selected coefficients; nothing to estimate")
    return sel, s.Xs[:, sel], np.asarray(fit.coefficients_std)[sel]


def _penalty_weights(b1, fit):
    # p'(|b|+) / (xi + |b|); zero-penalty fits carry xi = 0 and p' = 0
    ab = np.abs(b1)
    return penalty_right_derivative(ab, PenaltyParams(fit.lam, fit.a)) / (fit.xi + ab)


def score_contributions(fit, s):
    """Per-observation score contributions ``U`` (n x k) at the fitted coefficients.

    ``U[i, j] = -X_ij * r_i + b_j * p'(|b_j|+) / (2 (xi + |b_j|))`` with
    ``r = ys - X_1 b_1``, so twice the column sums give the gradient of the
    surrogate objective on the selected block.
    """
    _, X1, b1 = _selected(fit, s)
    r = s.ys - X1 @ b1
    return -X1 * r[:, None] + (0.5 * b1 * _penalty_weights(b1, fit))[None, :]


def covariance_estimate(fit, s):
    """Sandwich covariance ``n H^{-1} C H^{-1}`` of the selected coefficients.

    ``H = X_1'X_1 + n D_xi`` and ``C`` is the empirical covariance of the
    rows of :func:`score_contributions`. Tiny negative variances from
    round-off are clipped to zero with a RuntimeWarning.

    Raises
    ------
    EmptySupportError
        If no coefficient is selected.
    SingularSystemError
        If ``H`` is singular.
    """
    sel, X1, b1 = _selected(fit, s)
    n = s.n
    U = score_contributions(fit, s)
    colsum = U.sum(axis=0)
    C = U.T @ U / n - np.outer(colsum, colsum) / n**2
    H = X1.T @ X1 + np.diag(0.5 * n * _penalty_weights(b1, fit))
    Hinv = spd_inverse(H, what="selected block")
    cov = n * Hinv @ C @ Hinv
    cov = 0.5 * (cov + cov.T)
    var = np.diag(cov).copy()
    clipped = bool(np.any(var < 0))
    if clipped:
        warnings.warn("negative variance from round-off clipped to zero", RuntimeWarning, stacklevel=2)
        var = np.maximum(var, 0.0)
    se_std = np.sqrt(var)
    scales = s.column_scales[sel]
    return CovarianceEstimate(
        indices=tuple(sel),
        cov_std=cov,
        se_std=se_std,
        cov=cov / np.outer(scales, scales),
        se=se_std / scales,
        clipped=clipped,
    )
