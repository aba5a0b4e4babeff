"""Choosing lambda by generalized cross validation."""

from dataclasses import dataclass
import warnings

import numpy as np

from ._linalg import spd_solve
from .design import ols_solve, standardize
from .errors import ConfigurationError, NumericalError, SaturatedModelError, ZeroSignalError
from .penalty import DEFAULT_A, PenaltyParams, penalty_right_derivative
from .solver import SolverConfig, fit_standardized

GCV_TIE_RTOL = 1e-10


@dataclass(frozen=True)
class LambdaGrid:
    """Strictly decreasing penalty levels, largest first."""

    values: tuple

    def __post_init__(self):
        v = tuple(float(x) for x in np.atleast_1d(self.values))
        if not v:
            raise ConfigurationError("lambda grid is empty")
        if any(not np.isfinite(x) or x < 0 for x in v):
            raise ConfigurationError("lambda grid values must be finite and >= 0")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ConfigurationError("lambda grid must be strictly decreasing")
        object.__setattr__(self, "values", v)

    @property
    def count(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True)
class PathPoint:
    lam: float
    a: float
    gcv: float
    effective_params: float
    support_size: int
    converged: bool


@dataclass(frozen=True)
class TuningResult:
    best_fit: object
    best_lambda: float
    best_a: float
    path: tuple
    all_unconverged: bool = False


def _selected_block(fit, s):
    sel = list(fit.support.nonzero_indices)
    return s.Xs[:, sel], np.asarray(fit.coefficients_std)[sel]


def effective_params(fit, s):
    """Trace of the penalized hat matrix on the selected columns (``xi = 0``)."""
    X1, b1 = _selected_block(fit, s)
    if b1.size == 0:
        return 0.0
    n = s.n
    ab = np.abs(b1)
    d0 = 0.5 * penalty_right_derivative(ab, PenaltyParams(fit.lam, fit.a)) / ab
    G = X1.T @ X1
    H = spd_solve(G + np.diag(n * d0), G, what="selected block")
    return float(np.trace(H))


def gcv_score(fit, s):
    """``(RSS/n) / (1 - p_eff/n)**2`` on the standardized scale.

    Raises SaturatedModelError when the effective parameter count reaches n.
    """
    X1, b1 = _selected_block(fit, s)
    n = s.n
    r = s.ys - X1 @ b1
    pe = effective_params(fit, s)
    if pe >= n:
        raise SaturatedModelError(f"effective parameters {pe:.6g} >= n = {n}")
    return float(r @ r) / n / (1.0 - pe / n) ** 2


def lambda_max(s):
    """Smallest lambda at which the zero vector is stationary."""
    return 2.0 * float(np.max(np.abs(s.Xs.T @ s.ys))) / s.n


def default_grid(s, count=50, min_ratio=1e-3):
    """``count`` log-spaced values from ``lambda_max`` down to ``min_ratio * lambda_max``."""
    if count < 2:
        raise ConfigurationError(f"grid count must be >= 2, got {count}")
    if not 0 < min_ratio < 1:
        raise ConfigurationError(f"lambda-min-ratio must lie in (0, 1), got {min_ratio}")
    top = lambda_max(s)
    if top == 0:
        raise ZeroSignalError("response is orthogonal to every covariate; lambda grid undefined")
    return LambdaGrid(tuple(np.geomspace(top, top * min_ratio, count)))


def _path(d, s, grid, a, solver, warm_start, xi_reference):
    points, fits = [], []
    start = None
    for lam in grid:
        cfg = solver.with_penalty(PenaltyParams(lam, a))
        try:
            fit = fit_standardized(d, s, cfg, start=start, xi_reference=xi_reference)
            score = gcv_score(fit, s)
            pe = effective_params(fit, s)
        except NumericalError:
            points.append(PathPoint(lam, a, np.inf, np.nan, -1, False))
            fits.append(None)
            start = None
            continue
        points.append(PathPoint(lam, a, score, pe, fit.support.k, fit.converged))
        fits.append(fit)
        if warm_start and lam > 0:
            start = np.asarray(fit.coefficients_std)
    return points, fits


def tune(d, grid=None, a=DEFAULT_A, solver=None, *, warm_start=True, a_grid=None,
         grid_size=50, min_ratio=1e-3, xi_source="start"):
    """Fit the whole lambda path and keep the fit with the smallest GCV score.

    Parameters
    ----------
    d : Dataset
    grid : LambdaGrid, optional
        Defaults to :func:`default_grid` with ``grid_size`` and ``min_ratio``.
    a : float
        Shape parameter, used unless ``a_grid`` is given.
    solver : SolverConfig, optional
        Supplies ``tau``, ``max_iter`` and ``xi_override``; its lambda is ignored.
    warm_start : bool
        Start each fit from the previous (larger) lambda's solution instead of
        from least squares.
    a_grid : sequence of float, optional
        Also search over ``a``.
    xi_source : {"start", "ols"}
        Vector whose smallest nonzero magnitude sets each fit's perturbation:
        that fit's starting point, or the least-squares fit for every lambda.

    Returns
    -------
    TuningResult
        GCV scores within a relative ``GCV_TIE_RTOL`` of each other are ties
        and go to the larger lambda. Fits that hit ``max_iter`` still compete
        and keep their ``converged=False`` flag; a warning is issued when no
        fit on the path converged.
    """
    s = standardize(d)
    if grid is None:
        grid = default_grid(s, grid_size, min_ratio)
    if solver is None:
        solver = SolverConfig(PenaltyParams(0.0, a))
    if xi_source not in ("start", "ols"):
        raise ConfigurationError(f"xi_source must be 'start' or 'ols', got {xi_source!r}")
    xi_reference = ols_solve(s.Xs, s.ys) if xi_source == "ols" else None
    a_values = [a] if a_grid is None else [float(x) for x in a_grid]
    points, fits = [], []
    for a_val in a_values:
        pts, fs = _path(d, s, grid, a_val, solver, warm_start, xi_reference)
        points += pts
        fits += fs
    candidates = [i for i, f in enumerate(fits) if f is not None]
    if not candidates:
        raise NumericalError("every fit on the lambda path failed")
    all_unconverged = not any(fits[i].converged for i in candidates)
    if all_unconverged:
        warnings.warn("no fit on the lambda path converged; the selected fit is flagged",
                      RuntimeWarning, stacklevel=2)
    best = candidates[0]
    for i in candidates[1:]:
        if points[i].gcv < points[best].gcv * (1.0 - GCV_TIE_RTOL):
            best = i
    return TuningResult(fits[best], points[best].lam, points[best].a, tuple(points), all_unconverged)
