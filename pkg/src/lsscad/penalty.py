"""SCAD penalty, its right derivative and the perturbed penalty.

All functions broadcast over numpy arrays and accept plain floats.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

DEFAULT_A = 3.7


@dataclass(frozen=True)
class PenaltyParams:
    """Penalty level ``lam`` and shape ``a`` of the SCAD penalty."""

    lam: float
    a: float = DEFAULT_A

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ConfigurationError(f"lambda must be a finite value >= 0, got {self.lam}")
        if not np.isfinite(self.a) or self.a <= 2:
            raise ConfigurationError(f"a must be > 2, got {self.a}")


def penalty(theta, params):
    """Evaluate the SCAD penalty.

    Parameters
    ----------
    theta : float or ndarray
    params : PenaltyParams

    Returns
    -------
    float or ndarray
        ``lam*|t|`` on ``[0, lam]``, a concave quadratic on ``(lam, a*lam]``
        and the constant ``(a+1)*lam**2/2`` beyond.
    """
    lam, a = params.lam, params.a
    t = np.abs(np.asarray(theta, dtype=float))
    linear = lam * t
    middle = -(t * t - 2.0 * a * lam * t + lam * lam) / (2.0 * (a - 1.0))
    flat = (a + 1.0) * lam * lam / 2.0
    out = np.where(t <= lam, linear, np.where(t <= a * lam, middle, flat))
    return out[()] if out.ndim == 0 else out


def penalty_right_derivative(theta_abs, params):
    """Right derivative ``p'(|theta|+)`` of the penalty in ``|theta|``.

    Equals ``lam`` on ``[0, lam)``, ``(a*lam - t)/(a - 1)`` on
    ``[lam, a*lam)`` and zero from ``a*lam`` on.
    """
    lam, a = params.lam, params.a
    t = np.asarray(theta_abs, dtype=float)
    if np.any(t < 0):
        raise ValueError("penalty_right_derivative expects |theta| >= 0")
    out = np.where(t < lam, lam, np.where(t < a * lam, (a * lam - t) / (a - 1.0), 0.0))
    return out[()] if out.ndim == 0 else out


def perturbed_gradient(b, xi, params):
    """Derivative of the perturbed penalty, ``b * p'(|b|+) / (xi + |b|)``."""
    if xi <= 0:
        raise ValueError(f"xi must be positive, got {xi}")
    b = np.asarray(b, dtype=float)
    ab = np.abs(b)
    out = b * penalty_right_derivative(ab, params) / (xi + ab)
    return out[()] if out.ndim == 0 else out


def _perturbation_integral(u, xi, params):
    # closed form of int_0^u p'(t) / (xi + t) dt
    lam, a = params.lam, params.a
    u = np.asarray(u, dtype=float)
    if lam == 0.0:
        return np.zeros_like(u)
    first = lam * np.log1p(np.minimum(u, lam) / xi)
    v = np.clip(u, lam, a * lam)
    second = ((a * lam + xi) * np.log((xi + v) / (xi + lam)) - (v - lam)) / (a - 1.0)
    return first + second


def perturbed_penalty(b, xi, params):
    """Perturbed penalty ``p(b) - xi * int_0^|b| p'(t)/(xi + t) dt``.

    The integral is evaluated in closed form.
    """
    if xi <= 0:
        raise ValueError(f"xi must be positive, got {xi}")
    b = np.asarray(b, dtype=float)
    out = penalty(b, params) - xi * _perturbation_integral(np.abs(b), xi, params)
    out = np.asarray(out)
    return out[()] if out.ndim == 0 else out


def univariate_prox_oracle(z, params, grid_halfwidth=None, grid_step=1e-4):
    """Brute-force global minimizer of ``(t - z)**2 + penalty(t)``.

    Exhaustive search over the grid ``k * grid_step`` within
    ``[-grid_halfwidth, grid_halfwidth]``. Exact ties go to the smaller ``|t|``.
    The default half-width is ``|z| + a*lam + 1``.
    """
    z = float(z)
    reach = abs(z) + params.a * params.lam
    if grid_halfwidth is None:
        grid_halfwidth = reach + 1.0
    if grid_step <= 0 or grid_halfwidth <= 0:
        raise ConfigurationError("grid_step and grid_halfwidth must be positive")
    if grid_halfwidth < reach:
        raise ConfigurationError(
            f"grid half-width {grid_halfwidth} does not cover |z| + a*lam = {reach}"
        )
    k = int(np.floor(grid_halfwidth / grid_step))
    grid = np.arange(-k, k + 1) * grid_step
    g = (grid - z) ** 2 + penalty(grid, params)
    best = g.min()
    candidates = grid[g == best]
    theta = candidates[np.argmin(np.abs(candidates))]
    if abs(theta) >= k * grid_step:
        raise ConfigurationError("grid does not bracket the minimizer")
    return float(theta)
