import json

import numpy as np
import pytest

from lsscad import ConfigurationError, SimulationConfig, generate_dataset, run_replications
from lsscad.simulation import average_model_error

import oracles


def test_config_validation_and_defaults():
    c = SimulationConfig(n=100, p=10, rho=0.0, seed=1)
    assert c.true_beta == (1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    assert c.replications == 400 and c.noise_sd == 1.0 and c.tau == 1e-5
    assert c.true_support.nonzero_indices == (0, 1, 2, 3)
    for kw in [dict(p=100), dict(rho=1.0), dict(rho=-0.1), dict(replications=0), dict(seed=-1),
               dict(seed=1.5), dict(true_beta=(1.0,)), dict(estimators=("LASSO",)), dict(estimators=()),
               dict(xi_source="x"), dict(zero_rule="x")]:
        args = dict(n=100, p=10, rho=0.0, seed=1)
        args.update(kw)
        with pytest.raises(ConfigurationError):
            SimulationConfig(**args)


@pytest.mark.parametrize("rho", [0.0, 0.5])
def test_generated_correlations(rho):
    c = SimulationConfig(n=10000, p=3, rho=rho, seed=3)
    d, _ = generate_dataset(c, 0)
    R = np.corrcoef(d.X, rowvar=False)
    tol = 3 / np.sqrt(10000)
    assert abs(R[0, 1] - rho) <= tol and abs(R[1, 2] - rho) <= tol
    assert abs(R[0, 2] - rho**2) <= tol


def test_noiseless_single_signal():
    c = SimulationConfig(n=20, p=3, rho=0.2, seed=0, true_beta=(1.0, 0.0, 0.0), noise_sd=0.0)
    d, split = generate_dataset(c, 5)
    np.testing.assert_array_equal(d.y, d.X[:, 0])
    assert split.nonzero_indices == (0,)


def test_streams_are_keyed_by_seed_and_index():
    c = SimulationConfig(n=30, p=3, rho=0.0, seed=9)
    a, _ = generate_dataset(c, 2)
    b, _ = generate_dataset(c, 2)
    other, _ = generate_dataset(c, 3)
    np.testing.assert_array_equal(a.X, b.X)
    assert not np.array_equal(a.X, other.X)


def test_average_model_error():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((5, 2))
    bh, b = rng.standard_normal(2), rng.standard_normal(2)
    assert average_model_error(X, bh, b) == pytest.approx(oracles.ame(X, bh, b), rel=1e-12)
    assert average_model_error(X, b, b) == 0.0
    x = rng.standard_normal(8)
    x = (x - x.mean()) / np.sqrt(np.mean((x - x.mean()) ** 2))
    assert average_model_error(x[:, None], [1.0], [0.0]) == pytest.approx(1.0, rel=1e-12)


@pytest.fixture(scope="module")
def small_report():
    return run_replications(SimulationConfig(n=60, p=6, rho=0.2, seed=11, replications=12))


def test_report_invariants(small_report):
    m = 2
    for name in ("LS", "ORA", "AIC", "SCAD"):
        est = small_report[name]
        assert 0 <= est.k_bar <= m
        assert all(v >= 0 for v in est.ame) and len(est.ame) == est.successes
        assert est.successes + est.failures == 12
        assert sum(est.zero_count_histogram.values()) == est.successes
        assert len(est.bias) == 4 and len(est.sd) == 4
    assert small_report["ORA"].k_bar == m and small_report["ORA"].k_mode == m
    assert len(small_report["SCAD"].mean_se) == 4
    assert small_report["LS"].mean_se is None


def test_mode_ties_go_to_smallest():
    from lsscad.simulation import ReplicationRecord, _summarize
    c = SimulationConfig(n=20, p=3, rho=0.0, seed=0, true_beta=(1.0, 0.0, 0.0))
    recs = [ReplicationRecord(i, "ORA", True, coefficients=[1.0, 0.0, 0.0], zero_count=z,
                              exact_recovery=z == 2, ame=0.0, se=None)
            for i, z in enumerate([2, 1, 2, 1, 0])]
    assert _summarize("ORA", recs, c).k_mode == 1


def test_deterministic_and_worker_independent(small_report):
    c = SimulationConfig(n=60, p=6, rho=0.2, seed=11, replications=12)
    again = run_replications(c)
    dump = lambda r: json.dumps(r.to_dict(), sort_keys=True)
    assert dump(again) == dump(small_report)
    parallel = run_replications(c, workers=2)
    assert dump(parallel) == dump(small_report)


def test_subset_of_estimators():
    r = run_replications(SimulationConfig(n=40, p=4, rho=0.0, seed=1, replications=3, estimators=("ORA",)))
    assert list(r.estimators) == ["ORA"]
