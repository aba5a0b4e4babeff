import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from lsscad import (
    Dataset,
    DegenerateColumnError,
    SingularSystemError,
    SupportSplit,
    ValidationError,
    destandardize,
    ols_solve,
    standardize,
)
from lsscad._linalg import spd_inverse, spd_solve
from lsscad.design import StandardizedDataset


def _data(X, y=None):
    X = np.asarray(X, float)
    if y is None:
        y = np.arange(X.shape[0], dtype=float)
    return Dataset(X, y)


def test_dataset_validation():
    with pytest.raises(ValidationError):
        Dataset(np.ones((3, 3)), np.ones(3))
    with pytest.raises(ValidationError):
        Dataset(np.ones((1, 1)), np.ones(1))
    with pytest.raises(ValidationError):
        Dataset(np.ones((3, 1)), np.ones(4))
    with pytest.raises(ValidationError):
        Dataset(np.array([[1.0], [np.nan], [2.0]]), np.ones(3))
    d = Dataset(np.arange(6.0).reshape(3, 2), np.ones(3))
    assert (d.n, d.p, d.names) == (3, 2, ("x1", "x2"))
    with pytest.raises(ValueError):
        d.X[0, 0] = 1.0


def test_standardize_examples():
    s = standardize(_data([[1, 0], [-1, 0], [1, 2], [-1, 2]]))
    np.testing.assert_allclose(s.Xs[:, 0], [1, -1, 1, -1], atol=1e-15)
    np.testing.assert_allclose(s.Xs[:, 1], [-1, -1, 1, 1], atol=1e-15)
    with pytest.raises(DegenerateColumnError) as err:
        standardize(_data([[1, 5], [2, 5], [3, 5], [4, 5]]))
    assert err.value.column == 1


@given(hnp.arrays(float, (12, 3), elements=st.floats(-100, 100)), st.floats(-50, 50))
def test_standardized_invariants(X, shift):
    if np.any(np.ptp(X, axis=0) < 1e-3):
        return
    y = X @ np.array([1.0, -2.0, 0.5]) + shift
    s = standardize(Dataset(X, y))
    n = 12
    assert np.all(np.abs(s.Xs.sum(axis=0)) <= 1e-8 * n)
    assert np.all(np.abs((s.Xs**2).sum(axis=0) - n) <= 1e-8 * n)
    assert abs(s.ys.mean()) <= 1e-10 * (1 + abs(s.y_mean))
    again = standardize(Dataset(s.Xs, s.ys))
    np.testing.assert_allclose(again.Xs, s.Xs, atol=1e-12)


@given(hnp.arrays(float, (10, 3), elements=st.floats(-10, 10)),
       hnp.arrays(float, (3,), elements=st.floats(-5, 5)))
def test_predictions_transform_invariant(X, b_std):
    if np.any(np.ptp(X, axis=0) < 1e-2):
        return
    d = Dataset(X, np.linspace(0, 1, 10))
    s = standardize(d)
    coefs, intercept = destandardize(b_std, s)
    np.testing.assert_allclose(s.Xs @ b_std + s.y_mean, X @ coefs + intercept, atol=1e-10, rtol=1e-10)


def test_destandardize_examples():
    s = StandardizedDataset(np.zeros((2, 1)), np.zeros(2), np.array([3.0]), np.array([2.0]), 0.0)
    coefs, icpt = destandardize(np.array([1.0]), s)
    assert coefs[0] == 0.5 and icpt == -1.5
    s = StandardizedDataset(np.zeros((2, 2)), np.zeros(2), np.zeros(2), np.ones(2), 4.0)
    coefs, icpt = destandardize(np.array([0.0, 2.0]), s)
    assert list(coefs) == [0.0, 2.0] and icpt == 4.0
    coefs, icpt = destandardize(np.zeros(2), s)
    assert list(coefs) == [0.0, 0.0] and icpt == 4.0


def test_ols_examples():
    assert ols_solve(np.ones((2, 1)), np.ones(2))[0] == pytest.approx(1.0)
    assert np.all(ols_solve(np.random.default_rng(1).standard_normal((5, 2)), np.zeros(5)) == 0)
    # X'X = nI gives X'y/n; cross-checked on a residual-norm grid
    Q, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((5, 2)))
    X = Q * np.sqrt(5)
    y = np.random.default_rng(3).standard_normal(5)
    b = ols_solve(X, y)
    np.testing.assert_allclose(b, X.T @ y / 5, atol=1e-12)
    grid = np.linspace(-0.01, 0.01, 21)
    rss = lambda c: float(np.sum((y - X @ c) ** 2))
    assert all(rss(b) <= rss(b + np.array([u, v])) + 1e-15 for u in grid for v in grid)


def test_ols_singular_and_shape_errors():
    X = np.column_stack([np.arange(5.0), 2 * np.arange(5.0)])
    with pytest.raises(SingularSystemError):
        ols_solve(X, np.ones(5))
    with pytest.raises(ValidationError):
        ols_solve(np.ones((2, 2)), np.ones(2))


@given(hnp.arrays(float, (15, 4), elements=st.floats(-10, 10)))
def test_ols_residual_orthogonal(X):
    if np.linalg.cond(X) > 1e6:
        return
    y = np.sin(np.arange(15.0))
    b = ols_solve(X, y)
    assert np.max(np.abs(X.T @ (y - X @ b))) <= 1e-8 * max(np.max(np.abs(X.T @ y)), 1e-300)


def test_support_split():
    s = SupportSplit([3, 0], p=5)
    assert s.nonzero_indices == (0, 3) and s.zero_indices == (1, 2, 4) and (s.k, s.m) == (2, 3)
    assert SupportSplit.prefix(2, 4).nonzero_indices == (0, 1)
    assert SupportSplit.from_coefficients([0.0, 1.0, 0.0]).nonzero_indices == (1,)
    with pytest.raises(ValidationError):
        SupportSplit([0, 1], [1, 2])
    with pytest.raises(ValidationError):
        SupportSplit([0, 5], p=3)


def test_spd_solve_equilibration_and_singularity():
    A = np.diag([1e14, 1.0])
    np.testing.assert_allclose(spd_solve(A, np.array([1e14, 2.0])), [1.0, 2.0])
    with pytest.raises(SingularSystemError):
        spd_solve(np.ones((2, 2)), np.ones(2))
    with pytest.raises(SingularSystemError):
        spd_solve(np.array([[1.0, 0], [0, -1.0]]), np.ones(2))
    M = np.array([[4.0, 1.0], [1.0, 3.0]])
    np.testing.assert_allclose(spd_inverse(M) @ M, np.eye(2), atol=1e-14)
