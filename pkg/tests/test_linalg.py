import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superopt import linalg
from superopt.errors import NotPSDError


def test_svd_examples():
    assert linalg.svd(np.eye(2))[1] == pytest.approx([1, 1])
    assert linalg.svd(np.diag([3.0, 0.0]))[1] == pytest.approx([3, 0])


def test_svd_reconstruction_random(rng):
    for _ in range(100):
        m, n = rng.integers(1, 9, size=2)
        a = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
        u, s, vh = linalg.svd(a)
        assert np.max(np.abs(u @ np.diag(s) @ vh - a)) < 1e-12
        assert np.all(np.diff(s) <= 1e-14)


def test_cholesky_identity_and_rank():
    f = linalg.cholesky_psd(np.eye(3))
    assert f.rank == 3
    assert np.allclose(f.factor, np.eye(3))
    assert linalg.cholesky_psd(np.ones((2, 2))).rank == 1
    u = np.array([1.0, 0.0])
    v = np.array([np.cos(1e-12), np.sin(1e-12)])
    gram = np.array([[u @ u, u @ v], [v @ u, v @ v]])
    assert linalg.cholesky_psd(gram, 1e-9).rank == 1


def test_cholesky_rejects_indefinite():
    with pytest.raises(NotPSDError):
        linalg.cholesky_psd(np.diag([1.0, -0.5]))
    with pytest.raises(NotPSDError):
        linalg.cholesky_psd(np.array([[1.0, 2.0], [0.0, 1.0]]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(1, 8))
def test_cholesky_basis_orthonormalises(seed, n, k):
    r = np.random.default_rng(seed)
    a = r.normal(size=(n, k)) + 1j * r.normal(size=(n, k))
    gram = a @ a.conj().T
    f = linalg.cholesky_psd(gram)
    assert f.rank == min(n, k)
    c = f.basis
    assert np.max(np.abs(c.conj().T @ gram @ c - np.eye(f.rank))) < 1e-8


def test_least_squares_examples(rng):
    b = rng.normal(size=3)
    x, res = linalg.least_squares(np.eye(3), b)
    assert np.allclose(x, b) and res < 1e-14
    x, res = linalg.least_squares(np.array([[1.0], [1.0]]), np.array([1.0, 3.0]))
    assert x[0] == pytest.approx(2) and res == pytest.approx(np.sqrt(2))
    x, res = linalg.least_squares(np.zeros((2, 2)), np.array([3.0, 4.0]))
    assert np.allclose(x, 0) and res == pytest.approx(5)


def test_least_squares_residual_orthogonal(rng):
    a = rng.normal(size=(10, 4)) + 1j * rng.normal(size=(10, 4))
    b = rng.normal(size=10) + 1j * rng.normal(size=10)
    x, _ = linalg.least_squares(a, b)
    assert np.max(np.abs(a.conj().T @ (a @ x - b))) < 1e-12
