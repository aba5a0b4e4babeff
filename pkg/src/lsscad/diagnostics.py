"""Eigenvalue quantities and condition ratios for a design and support split.

The ratios are the finite-sample expressions whose limits the asymptotic
theory requires to vanish. No verdict is rendered; compare them across n.
"""

from dataclasses import asdict, dataclass
import math

import numpy as np

from .errors import ConfigurationError, DegenerateDesignError


@dataclass(frozen=True)
class EigenQuantities:
    """``rho_min`` of the full Gram, largest eigenvalues of the two blocks (``None`` if empty)."""

    rho_min: float
    pi_max: float = None
    omega_max: float = None


@dataclass(frozen=True)
class ConditionReport:
    a1a: float
    a1b: float
    a2a: float
    a2b: float
    a2c: float
    a3: float

    def to_dict(self):
        return asdict(self)


def eigen_quantities(Xs, split):
    """Smallest eigenvalue of ``n^-1 X'X`` and largest of the two Gram blocks."""
    Xs = np.asarray(Xs, dtype=float)
    n = Xs.shape[0]
    G = Xs.T @ Xs / n

    def top(idx):
        if not idx:
            return None
        block = G[np.ix_(idx, idx)]
        return float(np.linalg.eigvalsh(block)[-1])

    rho = float(np.linalg.eigvalsh(G)[0])
    if abs(rho) < 1e-12:
        rho = 0.0
    return EigenQuantities(
        rho_min=rho,
        pi_max=top(list(split.nonzero_indices)),
        omega_max=top(list(split.zero_indices)),
    )


def condition_ratios(q, lam, beta_min, n, p, k, rank_tol=1e-12):
    """The six ratios of the fixed-design conditions.

    ``a1a = sqrt(k) lam / sqrt(rho)``, ``a1b = sqrt(p) / sqrt(n rho)``,
    ``a2a = a1a / beta_min``, ``a2b = a1b / beta_min``,
    ``a2c = sqrt(p) / (n rho)`` and
    ``a3 = sqrt(max(pi, omega) p) / (sqrt(n) rho lam)``.

    Raises DegenerateDesignError when ``rho <= rank_tol``.
    """
    if not lam > 0:
        raise ConfigurationError(f"lambda must be positive, got {lam}")
    if not beta_min > 0:
        raise ConfigurationError(f"beta-min must be positive, got {beta_min}")
    rho = q.rho_min
    if not rho > rank_tol:
        raise DegenerateDesignError(
            f"smallest Gram eigenvalue is {rho:.3g}; the design is rank deficient")
    blocks = [v for v in (q.pi_max, q.omega_max) if v is not None]
    top = max(blocks) if blocks else 0.0
    a1a = math.sqrt(k) * lam / math.sqrt(rho)
    a1b = math.sqrt(p) / math.sqrt(n * rho)
    return ConditionReport(
        a1a=a1a,
        a1b=a1b,
        a2a=a1a / beta_min,
        a2b=a1b / beta_min,
        a2c=math.sqrt(p) / (n * rho),
        a3=math.sqrt(top * p) / (math.sqrt(n) * rho * lam),
    )
