"""Monte Carlo comparison of SCAD with least squares, AIC and the oracle.

Covariates are Gaussian with AR(1) correlation ``rho**|j-l|``, the response
is linear with Gaussian noise. Every replication draws from its own random
stream keyed by ``(seed, replication_index)``, so results do not depend on
execution order or on how replications are distributed over workers.
"""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
import logging

import numpy as np

from .baselines import LS_ZERO_BAND, aic_estimator, count_zeros, ls_estimator, oracle_estimator
from .design import Dataset, SupportSplit, standardize
from .errors import ConfigurationError, EmptySupportError, NumericalError
from .gcv import tune
from .inference import covariance_estimate
from .penalty import DEFAULT_A, PenaltyParams
from .solver import SolverConfig

log = logging.getLogger(__name__)

ESTIMATORS = ("LS", "ORA", "AIC", "SCAD")
# small coefficients near the zeroing threshold decay slowly; a generous
# cap keeps unconverged replications out of the aggregates
SIM_MAX_ITER = 20000
AME_QUANTILES = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0)


def default_beta(p):
    beta = np.zeros(p)
    k = min(4, p)
    beta[:k] = np.arange(1, k + 1)
    return beta


@dataclass(frozen=True)
class SimulationConfig:
    n: int
    p: int
    rho: float
    seed: int
    true_beta: tuple = None
    noise_sd: float = 1.0
    replications: int = 400
    tau: float = 1e-5
    max_iter: int = SIM_MAX_ITER
    grid_size: int = 50
    a: float = DEFAULT_A
    estimators: tuple = ESTIMATORS
    zero_rule: str = "gap"
    xi_source: str = "start"
    warm_start: bool = True

    def __post_init__(self):
        if not (isinstance(self.seed, (int, np.integer)) and self.seed >= 0):
            raise ConfigurationError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if self.p < 1 or self.p >= self.n:
            raise ConfigurationError(f"need 1 <= p < n, got n={self.n}, p={self.p}")
        if not 0 <= self.rho < 1:
            raise ConfigurationError(f"rho must lie in [0, 1), got {self.rho}")
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        if not self.noise_sd >= 0:
            raise ConfigurationError("noise_sd must be >= 0")
        beta = default_beta(self.p) if self.true_beta is None else np.asarray(self.true_beta, float)
        if beta.shape != (self.p,):
            raise ConfigurationError(f"true_beta must have length p={self.p}")
        object.__setattr__(self, "true_beta", tuple(float(b) for b in beta))
        est = tuple(self.estimators)
        unknown = set(est) - set(ESTIMATORS)
        if unknown or not est:
            raise ConfigurationError(f"unknown estimators {sorted(unknown)}; choose from {ESTIMATORS}")
        object.__setattr__(self, "estimators", tuple(e for e in ESTIMATORS if e in est))
        self.solver_config()
        if self.xi_source not in ("start", "ols"):
            raise ConfigurationError(f"xi_source must be 'start' or 'ols', got {self.xi_source!r}")

    def solver_config(self):
        return SolverConfig(PenaltyParams(0.0, self.a), self.tau, self.max_iter,
                            zero_rule=self.zero_rule)

    @property
    def true_support(self):
        return SupportSplit.from_coefficients(np.asarray(self.true_beta))


def ar1_covariance(p, rho):
    idx = np.arange(p)
    return rho ** np.abs(idx[:, None] - idx[None, :])


def replication_rng(seed, replication_index):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(replication_index)]))


def generate_dataset(config, replication_index):
    """Draw replication ``replication_index``; returns ``(Dataset, true_support)``."""
    rng = replication_rng(config.seed, replication_index)
    L = np.linalg.cholesky(ar1_covariance(config.p, config.rho))
    Z = rng.standard_normal((config.n, config.p))
    X = Z @ L.T
    eps = rng.standard_normal(config.n)
    beta = np.asarray(config.true_beta)
    y = X @ beta + config.noise_sd * eps
    return Dataset(X, y), config.true_support


def average_model_error(X, beta_hat, beta_true):
    """``mean((X (beta_hat - beta_true))**2)``."""
    diff = np.asarray(X, float) @ (np.asarray(beta_hat, float) - np.asarray(beta_true, float))
    return float(np.mean(diff**2))


@dataclass
class ReplicationRecord:
    index: int
    estimator: str
    ok: bool
    coefficients: list = None
    zero_count: int = None
    exact_recovery: bool = None
    ame: float = None
    se: list = None
    lam: float = None
    converged: bool = None
    reason: str = None


def _run_estimator(name, d, split, config):
    if name == "LS":
        return ls_estimator(d), None, None
    if name == "ORA":
        return oracle_estimator(d, split), None, None
    if name == "AIC":
        return aic_estimator(d), None, None
    res = tune(d, a=config.a, solver=config.solver_config(), grid_size=config.grid_size,
               warm_start=config.warm_start, xi_source=config.xi_source)
    fit = res.best_fit
    beta_true = np.asarray(config.true_beta)
    se = [None] * config.p
    try:
        cov = covariance_estimate(fit, standardize(d))
        for j, v in zip(cov.indices, cov.se):
            se[j] = float(v)
    except EmptySupportError:
        pass
    se = [se[j] for j in np.flatnonzero(beta_true != 0)]
    return fit, se, res.best_lambda


def run_replication(config, index):
    """All requested estimators on one replication; returns a list of records."""
    d, split = generate_dataset(config, index)
    trivial = split.zero_indices
    beta_true = np.asarray(config.true_beta)
    records = []
    for name in config.estimators:
        try:
            fit, se, lam = _run_estimator(name, d, split, config)
        except NumericalError as exc:
            records.append(ReplicationRecord(index, name, False, reason=str(exc)))
            continue
        if not fit.converged:
            records.append(ReplicationRecord(index, name, False, lam=lam, converged=False,
                                             reason="selected fit did not converge"))
            continue
        band = LS_ZERO_BAND if name == "LS" else 0.0
        zeros = count_zeros(fit, trivial, band)
        kept = np.abs(fit.coefficients[list(split.nonzero_indices)]) > band
        records.append(ReplicationRecord(
            index=index,
            estimator=name,
            ok=True,
            coefficients=[float(c) for c in fit.coefficients],
            zero_count=zeros,
            exact_recovery=bool(zeros == split.m and np.all(kept)),
            ame=average_model_error(d.X, fit.coefficients, beta_true),
            se=se,
            lam=lam,
            converged=True,
        ))
    return records


@dataclass
class EstimatorSummary:
    estimator: str
    successes: int
    failures: int
    bias: list
    sd: list
    k_bar: float
    k_mode: int
    zero_count_histogram: dict
    exact_recovery_fraction: float
    ame: list
    ame_median: float
    ame_quantiles: dict = None
    mean_se: list = None
    se_count: list = None


def _summarize(name, records, config):
    beta_true = np.asarray(config.true_beta)
    nz = np.flatnonzero(beta_true != 0)
    good = [r for r in records if r.ok]
    fails = len(records) - len(good)
    if not good:
        return EstimatorSummary(name, 0, fails, [], [], float("nan"), -1, {}, float("nan"), [], float("nan"))
    coefs = np.array([r.coefficients for r in good])[:, nz]
    bias = (coefs.mean(axis=0) - beta_true[nz]).tolist()
    sd = (coefs.std(axis=0, ddof=1) if len(good) > 1 else np.full(len(nz), np.nan)).tolist()
    zeros = [r.zero_count for r in good]
    tally = Counter(zeros)
    top = max(tally.values())
    mode = min(k for k, c in tally.items() if c == top)
    ames = [r.ame for r in good]
    summary = EstimatorSummary(
        estimator=name,
        successes=len(good),
        failures=fails,
        bias=bias,
        sd=sd,
        k_bar=float(np.mean(zeros)),
        k_mode=int(mode),
        zero_count_histogram={int(k): int(tally[k]) for k in sorted(tally)},
        exact_recovery_fraction=float(np.mean([r.exact_recovery for r in good])),
        ame=ames,
        ame_median=float(np.median(ames)),
        ame_quantiles={f"q{int(q * 100):02d}": float(v)
                       for q, v in zip(AME_QUANTILES, np.quantile(ames, AME_QUANTILES))},
    )
    if name == "SCAD":
        se = np.array([[np.nan if v is None else v for v in r.se] for r in good], dtype=float)
        summary.mean_se = [float(np.nanmean(col)) if np.any(~np.isnan(col)) else float("nan") for col in se.T]
        summary.se_count = [int(np.sum(~np.isnan(col))) for col in se.T]
    return summary


@dataclass
class SimulationReport:
    config: dict
    estimators: dict = field(default_factory=dict)

    def to_dict(self):
        return {"config": self.config,
                "estimators": {k: asdict(v) for k, v in self.estimators.items()}}

    def __getitem__(self, name):
        return self.estimators[name]


def _config_dict(config):
    out = asdict(config)
    out["true_beta"] = list(config.true_beta)
    out["estimators"] = list(config.estimators)
    return out


def _run_chunk(args):
    config, indices = args
    return [rec for i in indices for rec in run_replication(config, i)]


def run_replications(config, workers=1, progress=None):
    """Run every replication and aggregate per-estimator statistics.

    Parameters
    ----------
    config : SimulationConfig
    workers : int
        Process count; results are identical for any value.
    progress : callable, optional
        Called with the number of finished replications.

    Returns
    -------
    SimulationReport
    """
    indices = list(range(config.replications))
    records = []
    if workers <= 1:
        for i in indices:
            records.extend(run_replication(config, i))
            if progress is not None:
                progress(i + 1)
    else:
        chunks = [(config, indices[w::workers]) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_run_chunk, chunks):
                records.extend(chunk)
        records.sort(key=lambda r: r.index)
    report = SimulationReport(_config_dict(config))
    for name in config.estimators:
        mine = [r for r in records if r.estimator == name]
        report.estimators[name] = _summarize(name, mine, config)
        failed = [r for r in mine if not r.ok]
        if failed:
            log.warning("%s failed on %d replications", name, len(failed))
    return report
