import numpy as np
from scipy.linalg import lapack

from .errors import SingularSystemError

RCOND_FLOOR = 1e-12


def spd_solve(A, b, what="system"):
    """Solve ``A x = b`` for symmetric positive-definite ``A`` via Cholesky.

    ``A`` is symmetrically equilibrated by its diagonal first, so a large
    but harmless diagonal entry does not register as ill-conditioning.
    Raises SingularSystemError when the factorization fails or the
    reciprocal 1-norm condition estimate of the equilibrated matrix falls
    below ``RCOND_FLOOR``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.shape[0] == 0:
        return np.zeros(b.shape, dtype=float)
    diag = np.diag(A)
    if not np.all(diag > 0):
        raise SingularSystemError(f"{what} matrix is not positive definite")
    s = 1.0 / np.sqrt(diag)
    As = A * s[:, None] * s[None, :]
    c, info = lapack.dpotrf(As, lower=1, clean=0)
    if info != 0:
        raise SingularSystemError(f"{what} matrix is not positive definite")
    rcond, _ = lapack.dpocon(c, np.abs(As).sum(axis=0).max(), uplo="L")
    if not rcond >= RCOND_FLOOR:
        raise SingularSystemError(f"{what} matrix is numerically singular (rcond={rcond:.3g})")
    rhs = b * s if b.ndim == 1 else b * s[:, None]
    x, info = lapack.dpotrs(c, rhs, lower=1)
    if info != 0:
        raise SingularSystemError(f"{what} solve failed (info={info})")
    return x * s if x.ndim == 1 else x * s[:, None]


def spd_inverse(A, what="system"):
    return spd_solve(A, np.eye(np.shape(A)[0]), what=what)
