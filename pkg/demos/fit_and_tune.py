"""Fit a sparse linear model, pick lambda by GCV and report standard errors.

Run with ``python3 demos/fit_and_tune.py``.
"""

import numpy as np

from lsscad import (
    Dataset,
    PenaltyParams,
    SolverConfig,
    covariance_estimate,
    fit_scad,
    standardize,
    tune,
)

rng = np.random.default_rng(0)
n, p = 120, 8
X = rng.standard_normal((n, p))
beta = np.array([2.0, -1.5, 0, 0, 1.0, 0, 0, 0])
y = X @ beta + rng.standard_normal(n)
d = Dataset(X, y)

# a single fit at a fixed penalty level
fit = fit_scad(d, SolverConfig(PenaltyParams(0.3)))
print("lambda=0.3 coefficients:", np.round(fit.coefficients, 3))
print("iterations:", fit.iterations, "converged:", fit.converged)

# the whole path, scored by GCV
res = tune(d)
best = res.best_fit
print(f"\nGCV picked lambda={res.best_lambda:.4f} out of {len(res.path)} grid points")
print("selected columns:", list(best.support.nonzero_indices))

cov = covariance_estimate(best, standardize(d))
for j, est, se in zip(cov.indices, best.coefficients[list(cov.indices)], cov.se):
    print(f"  x{j + 1}: {est:+.3f}  (se {se:.3f})")
