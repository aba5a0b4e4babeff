"""SCAD-penalized least squares by perturbed majorize-minimize iteration.

Each step minimizes a quadratic surrogate of the perturbed objective
``||y - X b||^2 + n * sum_j p_xi(b_j)``, which amounts to the ridge-type
solve ``(X'X + n D) b = X'y`` with diagonal weights
``D_j = p'(|b_j|+) / (2 (xi + |b_j|))``.
"""

from dataclasses import dataclass, field
import logging

import numpy as np

from . import _kernel
from ._linalg import spd_solve
from .design import SupportSplit, destandardize, ols_solve, standardize
from .errors import ConfigurationError, SingularSystemError, ValidationError
from .penalty import (
    PenaltyParams,
    penalty_right_derivative,
    perturbed_gradient,
    perturbed_penalty,
)

log = logging.getLogger(__name__)

ZERO_RULES = ("gap", "gap+kkt")


@dataclass(frozen=True)
class SolverConfig:
    penalty: PenaltyParams
    tau: float = 1e-5
    max_iter: int = 500
    xi_override: float = None
    zero_rule: str = "gap"

    def __post_init__(self):
        if self.zero_rule not in ZERO_RULES:
            raise ConfigurationError(f"zero_rule must be one of {ZERO_RULES}, got {self.zero_rule!r}")
        if not self.tau > 0:
            raise ConfigurationError(f"tau must be positive, got {self.tau}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be a positive integer, got {self.max_iter}")
        if self.xi_override is not None and not self.xi_override > 0:
            raise ConfigurationError(f"xi_override must be positive, got {self.xi_override}")

    def with_lambda(self, lam):
        return self.with_penalty(PenaltyParams(lam, self.penalty.a))

    def with_penalty(self, params):
        return SolverConfig(params, self.tau, self.max_iter, self.xi_override, self.zero_rule)


@dataclass(frozen=True)
class FitResult:
    """A fitted linear model.

    ``coefficients`` and ``intercept`` are on the original data scale;
    ``coefficients_std`` holds the same fit on the standardized scale.
    Deselected coefficients are exact zeros in both.
    """

    coefficients: np.ndarray
    intercept: float
    support: SupportSplit
    iterations: int
    converged: bool
    xi: float
    lam: float
    a: float
    rss: float
    coefficients_std: np.ndarray
    objective_trace: tuple = field(default=(), repr=False)
    estimator: str = "SCAD"


def _rss(X, y, b):
    r = y - X @ b
    return float(r @ r)


def perturbed_objective(Xs, ys, b, xi, params):
    """Perturbed objective ``||ys - Xs b||^2 + n * sum_j p_xi(b_j)``."""
    n = Xs.shape[0]
    return _rss(Xs, ys, b) + n * float(np.sum(perturbed_penalty(b, xi, params)))


def compute_xi(b0, lam, tau, n):
    """Perturbation size ``tau / (2 n lam) * min{|b0_j| : b0_j != 0}``.

    Falls back to ``tau / (2 n lam)`` when ``b0`` is identically zero.
    """
    if not lam > 0:
        raise ConfigurationError("the perturbation is undefined for lambda = 0")
    b0 = np.abs(np.asarray(b0, dtype=float))
    nz = b0[b0 != 0]
    scale = nz.min() if nz.size else 1.0
    return tau / (2.0 * n * lam) * float(scale)


def _weights(b, xi, params):
    ab = np.abs(b)
    return 0.5 * penalty_right_derivative(ab, params) / (xi + ab)


def _gradient(XtX, Xty, n, b, xi, params):
    return -2.0 * (Xty - XtX @ b) + n * perturbed_gradient(b, xi, params)


def mm_step(Xs, ys, b_k, xi, params):
    """One majorize-minimize update ``(X'X + n D(b_k))^{-1} X'y``."""
    Xs = np.asarray(Xs, dtype=float)
    n = Xs.shape[0]
    return _step(Xs.T @ Xs, Xs.T @ np.asarray(ys, dtype=float), n, np.asarray(b_k, dtype=float), xi, params)


def _step(XtX, Xty, n, b, xi, params):
    A = XtX + np.diag(n * _weights(b, xi, params))
    return spd_solve(A, Xty, what="X'X + nD")


def converged(Xs, ys, b, xi, params, tau):
    """True when every partial derivative of the perturbed objective is below ``tau/2``."""
    Xs = np.asarray(Xs, dtype=float)
    b = np.asarray(b, dtype=float)
    g = _gradient(Xs.T @ Xs, Xs.T @ np.asarray(ys, dtype=float), Xs.shape[0], b, xi, params)
    return bool(np.all(np.abs(g) < tau / 2.0))


def finalize_zeros(b, xi, params, tau, n, XtX=None, Xty=None):
    """Zero the coordinates that the perturbation alone keeps near zero.

    A coordinate is a candidate when the perturbation moves its gradient by
    more than ``tau/2``, i.e. ``n * xi * p'(|b_j|+) / (xi + |b_j|) > tau/2``.
    When the Gram matrix ``XtX`` and ``Xty`` are given, a candidate is zeroed
    only if zero also satisfies the subgradient condition of the unperturbed
    objective in that coordinate, ``|2 X_j'(y - X b_{-j})| <= n * lam``;
    this keeps small but genuine coefficients that the gap test alone would
    remove whenever ``|b_j|`` is below the smallest starting magnitude.
    """
    b = np.array(b, dtype=float)
    ab = np.abs(b)
    gap = n * xi * penalty_right_derivative(ab, params) / (xi + ab)
    drop = gap > tau / 2.0
    if XtX is not None and np.any(drop):
        partial = Xty - XtX @ b + np.diag(XtX) * b
        drop &= 2.0 * np.abs(partial) <= n * params.lam + tau / 2.0
    b[drop] = 0.0
    return b


def _package(d, s, b_std, *, iterations, is_converged, xi, params, trace, estimator="SCAD"):
    b_std = np.asarray(b_std, dtype=float)
    coefs, intercept = destandardize(b_std, s)
    coefs[b_std == 0] = 0.0
    resid = d.y - intercept - d.X @ coefs
    coefs.setflags(write=False)
    b_std = b_std.copy()
    b_std.setflags(write=False)
    return FitResult(
        coefficients=coefs,
        intercept=float(intercept),
        support=SupportSplit.from_coefficients(b_std),
        iterations=int(iterations),
        converged=bool(is_converged),
        xi=float(xi),
        lam=float(params.lam),
        a=float(params.a),
        rss=float(resid @ resid),
        coefficients_std=b_std,
        objective_trace=tuple(trace),
        estimator=estimator,
    )


def fit_standardized(d, s, config, start=None, xi_reference=None):
    """Fit on an already standardized copy ``s`` of ``d``.

    ``start`` is an optional standardized-scale starting vector; the default
    is the least-squares fit. ``xi_reference`` is the vector whose smallest
    nonzero magnitude sets the perturbation; it defaults to the start.
    """
    params = config.penalty
    Xs, ys, n = s.Xs, s.ys, s.n
    XtX = Xs.T @ Xs
    Xty = Xs.T @ ys
    if params.lam == 0:
        b = ols_solve(Xs, ys)
        return _package(d, s, b, iterations=0, is_converged=True, xi=0.0, params=params,
                        trace=[_rss(Xs, ys, b)])

    b = ols_solve(Xs, ys) if start is None else np.array(start, dtype=float)
    if b.shape != (s.p,):
        raise ValidationError(f"start vector must have length {s.p}")
    if config.xi_override is not None:
        xi = config.xi_override
    else:
        xi = compute_xi(b if xi_reference is None else xi_reference, params.lam, config.tau, n)
    trace = np.empty(config.max_iter + 1)
    b, it, status = _kernel.mm_iterate(
        XtX, Xty, float(ys @ ys), float(n), b, float(xi), float(params.lam), float(params.a),
        float(config.tau), int(config.max_iter), trace)
    if status == _kernel.SINGULAR:
        raise SingularSystemError(
            f"X'X + nD became singular at iteration {it} (lambda={params.lam:g}); "
            "try a larger lambda or check the design for collinearity")
    done = status == _kernel.CONVERGED
    if not done:
        log.debug("MM did not converge in %d iterations (lambda=%g)", config.max_iter, params.lam)
    if config.zero_rule == "gap+kkt":
        b = finalize_zeros(b, xi, params, config.tau, n, XtX, Xty)
    else:
        b = finalize_zeros(b, xi, params, config.tau, n)
    return _package(d, s, b, iterations=it, is_converged=done, xi=xi, params=params,
                    trace=trace[: it + 1].tolist())


def fit_scad(d, config):
    """SCAD-penalized least-squares fit of ``d`` for fixed ``lambda`` and ``a``.

    Starts at least squares, iterates MM steps until the gradient test passes
    or ``max_iter`` is hit (the result is then flagged ``converged=False``),
    and finally zeroes coordinates held near zero only by the perturbation.

    Parameters
    ----------
    d : Dataset
    config : SolverConfig

    Returns
    -------
    FitResult
    """
    return fit_standardized(d, standardize(d), config)
