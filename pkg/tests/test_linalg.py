import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from actuator_design.linalg import OFFDIAG_TOL, canonical_sign, jacobi_eigh


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 12))
def test_jacobi_matches_lapack(seed, n):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n))
    a = m + m.T
    w, v = jacobi_eigh(a)
    ref = np.linalg.eigvalsh(a)
    scale = np.abs(a).max()
    assert np.abs(w - ref).max() <= 1e-12 * scale
    assert np.abs(v.T @ v - np.eye(n)).max() < 1e-12
    assert np.abs(a @ v - v * w).max() <= 1e-11 * scale


def test_jacobi_diagonal_is_untouched():
    w, v = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert w.tolist() == [1.0, 2.0, 3.0]
    assert np.array_equal(np.abs(v), np.eye(3)[:, [1, 2, 0]])


def test_jacobi_zero_row_keeps_exact_zero():
    a = np.array([[0.5, 0.0], [0.0, 0.0]])
    w, v = jacobi_eigh(a)
    assert w[0] == 0.0
    assert np.abs(v[:, 0]).tolist() == [0.0, 1.0]


def test_jacobi_off_diagonal_convergence():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((6, 6))
    a = m @ m.T
    w, v = jacobi_eigh(a)
    d = v.T @ a @ v
    off = d - np.diag(np.diag(d))
    assert np.abs(off).max() < 10 * OFFDIAG_TOL * np.abs(a).max()


def test_jacobi_relative_accuracy_on_graded_matrix():
    # Hilbert-like matrix: smallest eigenvalue ~1e-13 of the largest
    lam = np.arange(1.0, 9.0)
    psi = 1.0 / (lam[:, None] + lam[None, :])
    w, _ = jacobi_eigh(psi)
    inv_w = np.linalg.eigvalsh(np.linalg.inv(psi))
    assert w[0] == pytest.approx(1.0 / inv_w[-1], rel=1e-5)


def test_canonical_sign():
    assert canonical_sign(np.array([0.0, -1.0, 2.0])).tolist() == [0.0, 1.0, -2.0]
    assert canonical_sign(np.array([1e-20, -1.0])).tolist() == [-1e-20, 1.0]
