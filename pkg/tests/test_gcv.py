import warnings

import numpy as np
import pytest

from lsscad import (
    ConfigurationError,
    Dataset,
    LambdaGrid,
    PenaltyParams,
    SaturatedModelError,
    SolverConfig,
    ZeroSignalError,
    default_grid,
    effective_params,
    gcv_score,
    ols_solve,
    standardize,
    tune,
)
from lsscad.gcv import lambda_max
from lsscad.simulation import SimulationConfig, generate_dataset

import oracles
from conftest import make_data
from test_inference import fake_fit, raw


def test_grid_validation():
    assert LambdaGrid([3.0, 2.0, 1.0]).count == 3
    for bad in ([], [1.0, 1.0], [1.0, 2.0], [1.0, -1.0], [np.inf, 1.0]):
        with pytest.raises(ConfigurationError):
            LambdaGrid(bad)


def test_effective_params_examples():
    toy = raw(np.ones((2, 1)), np.ones(2))
    assert effective_params(fake_fit([0.05], 0.1, 1e-3), toy) == pytest.approx(0.5, rel=1e-14)
    assert effective_params(fake_fit([0.0], 0.1, 1e-3), toy) == 0.0
    X = np.random.default_rng(0).standard_normal((20, 3))
    assert effective_params(fake_fit([2.0, -3.0, 1.0], 0.1, 1e-3), raw(X, np.zeros(20))) == pytest.approx(3.0)


def _residual_orthogonal(X, size, seed=0):
    r = np.random.default_rng(seed).standard_normal(X.shape[0])
    r -= X @ np.linalg.lstsq(X, r, rcond=None)[0]
    return r * np.sqrt(size / float(r @ r))


def test_gcv_examples():
    X = np.random.default_rng(1).standard_normal((100, 4))
    b = np.array([2.0, -2.0, 3.0, 4.0])
    fit = fake_fit(b, 0.1, 1e-4)
    assert gcv_score(fit, raw(X, X @ b + _residual_orthogonal(X, 10.0))) == pytest.approx(0.1 / 0.96**2, rel=1e-10)
    assert gcv_score(fit, raw(X, X @ b)) == pytest.approx(0.0, abs=1e-25)
    y = np.random.default_rng(2).standard_normal(100)
    assert gcv_score(fake_fit(np.zeros(4), 0.1, 1e-4), raw(X, y)) == pytest.approx(float(y @ y) / 100)


def test_gcv_matches_hat_matrix_oracle():
    d = make_data(seed=3, rho=0.5)
    s = standardize(d)
    from lsscad import fit_scad
    fit = fit_scad(d, SolverConfig(PenaltyParams(0.1)))
    sel = list(fit.support.nonzero_indices)
    ref, pe = oracles.gcv(s.Xs[:, sel], s.ys, np.asarray(fit.coefficients_std)[sel], 0.1, 3.7)
    assert gcv_score(fit, s) == pytest.approx(ref, rel=1e-10)
    assert effective_params(fit, s) == pytest.approx(pe, rel=1e-10)
    assert 0 <= pe <= len(sel) + 1e-12


def test_ols_gcv_identity_and_saturation():
    d = make_data(seed=4)
    s = standardize(d)
    res = tune(d, LambdaGrid([0.0]))
    b = ols_solve(s.Xs, s.ys)
    rss = float(np.sum((s.ys - s.Xs @ b) ** 2))
    assert res.path[0].gcv == pytest.approx(rss / d.n / (1 - d.p / d.n) ** 2, rel=1e-12)
    np.testing.assert_allclose(res.best_fit.coefficients_std, b, rtol=1e-12)
    assert res.best_lambda == 0.0
    X = np.random.default_rng(0).standard_normal((3, 3))
    with pytest.raises(SaturatedModelError):
        gcv_score(fake_fit([5.0, 5.0, 5.0], 0.1, 1e-3), raw(X, np.zeros(3)))


def test_default_grid():
    d = make_data(seed=5)
    s = standardize(d)
    col = Dataset(d.X, s.Xs[:, 0])
    assert lambda_max(standardize(col)) == pytest.approx(2.0, rel=1e-12)
    g = default_grid(s, 2)
    assert g.values == pytest.approx((lambda_max(s), lambda_max(s) / 1000), rel=1e-14)
    g = default_grid(s)
    assert g.count == 50 and g.values[-1] == pytest.approx(g.values[0] / 1000)
    with pytest.raises(ZeroSignalError):
        default_grid(standardize(Dataset(d.X, np.zeros(d.n))))
    with pytest.raises(ConfigurationError):
        default_grid(s, 1)


def test_zero_is_stationary_at_lambda_max():
    d = make_data(seed=6)
    s = standardize(d)
    assert np.max(2 * np.abs(s.Xs.T @ s.ys)) <= s.n * lambda_max(s) * (1 + 1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_best_lambda_attains_minimum_with_larger_lambda_ties(seed):
    res = tune(make_data(seed=seed))
    gcvs = np.array([pt.gcv for pt in res.path])
    best = gcvs.min()
    tied = [pt.lam for pt in res.path if pt.gcv <= best * (1 + 1e-10)]
    assert res.best_lambda == max(tied)
    assert res.best_lambda in [pt.lam for pt in res.path]
    for pt in res.path:
        assert 0 <= pt.effective_params <= pt.support_size + 1e-9


def test_exact_ties_go_to_larger_lambda():
    # beyond lambda_max every fit is the empty model with the same score
    d = make_data(seed=7)
    top = lambda_max(standardize(d))
    res = tune(d, LambdaGrid([4 * top, 3 * top, 2 * top]))
    assert res.best_lambda == 4 * top
    assert res.best_fit.support.k == 0


def test_pure_noise_selects_empty_model_mostly():
    empty = 0
    for seed in range(50):
        d = make_data(seed=1000 + seed, beta=np.zeros(10))
        empty += tune(d).best_fit.support.k == 0
    assert empty > 25


def test_all_unconverged_warns():
    d = make_data(seed=8)
    with pytest.warns(RuntimeWarning):
        res = tune(d, LambdaGrid([0.5, 0.1]), solver=SolverConfig(PenaltyParams(0.0), max_iter=1))
    assert res.all_unconverged and not res.best_fit.converged


def test_a_grid_and_option_validation():
    d = make_data(seed=9)
    res = tune(d, LambdaGrid([0.3, 0.1]), a_grid=[3.0, 3.7])
    assert len(res.path) == 4 and res.best_a in (3.0, 3.7)
    with pytest.raises(ConfigurationError):
        tune(d, xi_source="nope")


def _agreement(xi_source, reps=100):
    config = SimulationConfig(n=100, p=10, rho=0.0, seed=7)
    same = 0
    for i in range(reps):
        d, _ = generate_dataset(config, i)
        warm = tune(d, xi_source=xi_source).best_lambda
        cold = tune(d, xi_source=xi_source, warm_start=False).best_lambda
        same += warm == cold
    return same / reps


@pytest.mark.slow
def test_warm_and_cold_paths_agree_default():
    assert _agreement("start") >= 0.95


@pytest.mark.slow
def test_warm_and_cold_paths_agree_with_fixed_perturbation():
    assert _agreement("ols") >= 0.95
