import numpy as np
import pytest
import scipy.linalg

import graphlogm

U = graphlogm.unit_roundoff


def test_logm_identity():
    l, rep = graphlogm.logm(np.eye(5))
    assert np.array_equal(l, np.zeros((5, 5)))
    assert rep["s"] == 0
    assert rep["k"] == 1


def test_logm_matches_scipy_round_trip():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((20, 20))
    a = np.eye(20) + 0.5 * a / np.abs(a).sum(axis=0).max()
    l, rep = graphlogm.logm(a)
    assert rep["alpha"] <= rep["theta"]
    assert np.linalg.norm(scipy.linalg.expm(l) - a, 1) <= 1e-13


def test_logm_known_log():
    a, ref = graphlogm.test_matrix("b", seed=2, n=16, kappa=10.0)
    l, _ = graphlogm.logm(a)
    assert graphlogm.relative_error(l, ref) <= 1e3 * 100 * U


def test_logm_complex_and_ps():
    rng = np.random.default_rng(4)
    z = np.eye(6) + 0.2 * (rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))) / 6
    l, _ = graphlogm.logm(z)
    assert l.dtype == np.complex128
    assert np.linalg.norm(scipy.linalg.expm(l) - z, 1) <= 1e-13
    lp, rep = graphlogm.logm(z.real, method="ps")
    lg, _ = graphlogm.logm(z.real)
    assert np.linalg.norm(lp - lg, 1) <= 1e3 * U * np.linalg.norm(lg, 1)


def test_errors():
    with pytest.raises(graphlogm.NumericalError, match="singular"):
        graphlogm.logm(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(graphlogm.InputError):
        graphlogm.logm(np.ones((2, 3)))
    with pytest.raises(graphlogm.InputError):
        graphlogm.logm(np.eye(2), method="pade")


def test_sqrtm():
    x = graphlogm.sqrtm(np.diag([4.0, 9.0]))
    assert np.allclose(x, np.diag([2.0, 3.0]), rtol=100 * U, atol=0)


def test_tables_and_schemes():
    pub = graphlogm.theta_table("published")
    assert len(pub) == 9
    assert pub[4]["m"] == "14+"
    shipped = graphlogm.theta_table()
    thetas = [r["theta"] for r in shipped]
    assert thetas == sorted(thetas)
    s = graphlogm.scheme(5)
    assert s["k"] == 5 and len(s["y"]) == 7
    assert graphlogm.stability(3, digits=100) <= 6.0
