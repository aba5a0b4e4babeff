"""Compare SCAD with least squares, AIC subset selection and the oracle fit,
then look at the design condition ratios for the true support.

Run with ``python3 demos/baselines_and_diagnostics.py``.
"""

import numpy as np

from lsscad import (
    SupportSplit,
    aic_estimator,
    condition_ratios,
    eigen_quantities,
    ls_estimator,
    oracle_estimator,
    standardize,
    tune,
)
from lsscad.simulation import SimulationConfig, average_model_error, generate_dataset

config = SimulationConfig(n=100, p=10, rho=0.5, seed=11)
d, truth = generate_dataset(config, 0)
beta = np.asarray(config.true_beta)

fits = {
    "LS": ls_estimator(d),
    "AIC": aic_estimator(d),
    "ORA": oracle_estimator(d, truth),
    "SCAD": tune(d).best_fit,
}
for name, fit in fits.items():
    ame = average_model_error(d.X, fit.coefficients, beta)
    print(f"{name:>4}: support {list(fit.support.nonzero_indices)}  model error {ame:.4f}")

s = standardize(d)
split = SupportSplit.from_coefficients(beta)
q = eigen_quantities(s.Xs, split)
print(f"\nsmallest Gram eigenvalue {q.rho_min:.3f}, block maxima {q.pi_max:.3f} / {q.omega_max:.3f}")
report = condition_ratios(q, lam=0.1, beta_min=1.0, n=s.n, p=s.p, k=split.k)
for key, value in report.to_dict().items():
    print(f"  {key}: {value:.4f}")
