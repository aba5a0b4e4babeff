import numpy as np
import pytest
from hypothesis import settings

from lsscad import Dataset

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def make_data(n=100, p=10, seed=0, beta=None, noise=1.0, rho=0.0):
    rng = np.random.default_rng(seed)
    idx = np.arange(p)
    L = np.linalg.cholesky(rho ** np.abs(idx[:, None] - idx[None, :]))
    X = rng.standard_normal((n, p)) @ L.T
    if beta is None:
        beta = np.zeros(p)
        beta[: min(4, p)] = np.arange(1, min(4, p) + 1)
    y = X @ np.asarray(beta, float) + noise * rng.standard_normal(n)
    return Dataset(X, y)


@pytest.fixture
def reference_data():
    return make_data()


ACCEPTANCE_LINES = {}


def record_criterion(number, ok, detail):
    ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[number])
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
