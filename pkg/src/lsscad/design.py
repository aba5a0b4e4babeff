"""Datasets, the squared-norm-n standardization and plain least squares."""

from dataclasses import dataclass, field

import numpy as np

from ._linalg import spd_solve
from .errors import DegenerateColumnError, ValidationError


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """Response ``y`` (length n) and covariate matrix ``X`` (n x p).

    Requires ``n >= 2``, ``1 <= p < n`` and finite entries.
    """

    X: np.ndarray
    y: np.ndarray
    names: tuple = None

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or y.ndim != 1:
            raise ValidationError("X must be 2-d and y 1-d")
        n, p = X.shape
        if y.shape[0] != n:
            raise ValidationError(f"X has {n} rows but y has {y.shape[0]} entries")
        if n < 2 or p < 1:
            raise ValidationError(f"need n >= 2 and p >= 1, got n={n}, p={p}")
        if p >= n:
            raise ValidationError(f"need p < n for identification, got p={p}, n={n}")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValidationError("dataset contains non-finite entries")
        names = self.names
        if names is None:
            names = tuple(f"x{j + 1}" for j in range(p))
        elif len(names) != p:
            raise ValidationError(f"expected {p} covariate names, got {len(names)}")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "names", tuple(str(s) for s in names))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    def subset(self, columns):
        columns = list(columns)
        return Dataset(self.X[:, columns], self.y, tuple(self.names[j] for j in columns))


@dataclass(frozen=True)
class StandardizedDataset:
    """Centered data whose every covariate column has squared norm ``n``.

    ``Xs[:, j] = (X[:, j] - column_means[j]) / column_scales[j]`` and
    ``ys = y - y_mean``.
    """

    Xs: np.ndarray
    ys: np.ndarray
    column_means: np.ndarray
    column_scales: np.ndarray
    y_mean: float

    @property
    def n(self):
        return self.Xs.shape[0]

    @property
    def p(self):
        return self.Xs.shape[1]


@dataclass(frozen=True)
class SupportSplit:
    """Partition of ``range(p)`` into nonzero and zero index sets."""

    nonzero_indices: tuple
    zero_indices: tuple = field(default=None)
    p: int = None

    def __post_init__(self):
        nz = tuple(sorted(int(j) for j in self.nonzero_indices))
        if self.p is None and self.zero_indices is None:
            raise ValidationError("SupportSplit needs zero_indices or p")
        if self.zero_indices is None:
            z = tuple(j for j in range(self.p) if j not in set(nz))
        else:
            z = tuple(sorted(int(j) for j in self.zero_indices))
        p = len(nz) + len(z)
        if self.p is not None and self.p != p:
            raise ValidationError(f"support split covers {p} indices, expected {self.p}")
        if set(nz) & set(z) or set(nz) | set(z) != set(range(p)) or len(set(nz)) != len(nz):
            raise ValidationError("support split must partition range(p)")
        object.__setattr__(self, "nonzero_indices", nz)
        object.__setattr__(self, "zero_indices", z)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_coefficients(cls, coefs):
        coefs = np.asarray(coefs)
        return cls(np.flatnonzero(coefs != 0), p=coefs.shape[0])

    @classmethod
    def prefix(cls, k, p):
        return cls(range(k), p=p)

    @property
    def k(self):
        return len(self.nonzero_indices)

    @property
    def m(self):
        return len(self.zero_indices)


def standardize(d):
    """Center ``y`` and every column of ``X``, then scale columns to squared norm n.

    Raises
    ------
    DegenerateColumnError
        If a column of ``X`` is constant.
    """
    X, y, n = d.X, d.y, d.n
    for j in range(d.p):
        if np.ptp(X[:, j]) == 0:
            raise DegenerateColumnError(j)
    means = X.mean(axis=0)
    centered = X - means
    scales = np.sqrt((centered**2).sum(axis=0) / n)
    if np.any(scales == 0):
        raise DegenerateColumnError(int(np.flatnonzero(scales == 0)[0]))
    y_mean = float(y.mean())
    return StandardizedDataset(
        Xs=_frozen(centered / scales),
        ys=_frozen(y - y_mean),
        column_means=_frozen(means),
        column_scales=_frozen(scales),
        y_mean=y_mean,
    )


def destandardize(coefs_std, s):
    """Map standardized-scale coefficients back to the original scale.

    Returns
    -------
    coefs : ndarray
    intercept : float
    """
    coefs = np.asarray(coefs_std, dtype=float) / s.column_scales
    intercept = s.y_mean - float(s.column_means @ coefs)
    return coefs, intercept


def ols_solve(X, y):
    """Least-squares coefficients from the normal equations ``X'X b = X'y``.

    Raises SingularSystemError for a rank-deficient ``X``.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if k >= n:
        raise ValidationError(f"least squares needs k < n, got k={k}, n={n}")
    if k == 0:
        return np.zeros(0)
    return spd_solve(X.T @ X, X.T @ np.asarray(y, dtype=float), what="design Gram")
