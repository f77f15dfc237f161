import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from actuator_design.cauchy import alternating_signs, build_psi
from actuator_design.errors import DimensionMismatch, NotUnitVector
from actuator_design.gramian import build_gramian, gramian_matrix, smallest_eigenpair, worst_energy
from actuator_design.minimax import solve
from actuator_design.spectrum import validate_spectrum

import oracles

S12 = validate_spectrum([1.0, 2.0])
S3 = validate_spectrum([3.0])
R = 1 / math.sqrt(2)


def test_build_gramian_examples():
    g = build_gramian(S12, [1.0, 0.0])
    assert g.matrix.tolist() == [[0.5, 0.0], [0.0, 0.0]]
    assert g.singular
    g = build_gramian(S12, [R, R])
    assert np.allclose(g.matrix, [[1 / 4, 1 / 6], [1 / 6, 1 / 8]], rtol=1e-15, atol=0)
    assert build_gramian(S3, [1.0]).matrix.tolist() == [[1 / 6]]


def test_build_gramian_errors():
    with pytest.raises(DimensionMismatch):
        build_gramian(S12, [1.0])
    with pytest.raises(NotUnitVector):
        build_gramian(S12, [1.0, 1.0])


def test_gramian_is_immutable():
    g = build_gramian(S12, [R, R])
    with pytest.raises(ValueError):
        g.matrix[0, 0] = 1.0


def test_smallest_eigenpair_examples():
    p = smallest_eigenpair(build_gramian(S12, [1.0, 0.0]))
    assert p.value == 0.0
    assert p.vector.tolist() == [0.0, 1.0]
    p = smallest_eigenpair(build_gramian(S3, [1.0]))
    assert p.value == pytest.approx(1 / 6, rel=1e-15)
    assert p.vector.tolist() == [1.0]
    p = smallest_eigenpair(build_gramian(S12, solve(S12).v_star))
    assert p.value == pytest.approx(1 / 102, rel=1e-12)


def test_worst_energy_examples():
    assert worst_energy(build_gramian(S12, [1.0, 0.0])) == math.inf
    assert worst_energy(build_gramian(S3, [1.0])) == pytest.approx(6.0, rel=1e-15)
    assert worst_energy(build_gramian(S12, solve(S12).v_star)) == pytest.approx(102.0, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 8))
def test_lyapunov_residual(seed, n):
    rng = np.random.default_rng(seed)
    s = oracles.random_spectrum(rng, n)
    g = build_gramian(s, oracles.random_unit(rng, n))
    assert g.lyapunov_residual() <= 1e-10


@pytest.mark.parametrize("lam", [[1.0, 2.0], [0.5, 1.3, 2.0], [3.0]])
def test_gramian_matches_quadrature_of_integral(lam):
    rng = np.random.default_rng(len(lam))
    b = oracles.random_unit(rng, len(lam))
    s = validate_spectrum(lam)
    assert np.abs(build_gramian(s, b).matrix - oracles.gramian_by_quadrature(lam, b)).max() < 1e-6


def test_rank_deficiency_equals_zero_count():
    s = validate_spectrum([0.7, 1.1, 2.5, 4.0])
    for b in ([1, 0, 0, 0], [0.6, 0, 0.8, 0], [0.5, 0.5, 0.5, 0.5], [0, 0.6, 0.48, 0.64]):
        w = np.linalg.eigvalsh(build_gramian(s, b).matrix)
        zeros = int(np.sum(np.asarray(b) == 0))
        assert int(np.sum(w <= 1e-14 * w.max())) == zeros


def test_eigenpair_residual_and_sign_convention():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(1, 7))
        s = oracles.random_spectrum(rng, n)
        g = build_gramian(s, oracles.random_unit(rng, n))
        p = smallest_eigenpair(g)
        assert np.linalg.norm(g.matrix @ p.vector - p.value * p.vector) <= 1e-10 * np.abs(g.matrix).max()
        assert abs(np.linalg.norm(p.vector) - 1) < 1e-14
        assert p.vector[np.flatnonzero(np.abs(p.vector) > 1e-12)[0]] > 0
        # LAPACK is only absolutely accurate (about eps * ||W||) on the bottom eigenvalue
        assert abs(p.value - oracles.lapack_xi(s.values, g.b)) <= 1e-13 * np.abs(g.matrix).max()


def test_bottom_eigenvector_sign_structure_inside_z():
    # W(b) = D Psi D, so the bottom eigenvector carries sign(b) times the alternating pattern
    rng = np.random.default_rng(8)
    for _ in range(30):
        n = int(rng.integers(2, 6))
        s = oracles.random_spectrum(rng, n)
        b = oracles.random_unit(rng, n, min_entry=0.05)
        x = smallest_eigenpair(build_gramian(s, b)).vector
        pattern = np.sign(b) * alternating_signs(n)
        assert np.array_equal(np.sign(x), pattern) or np.array_equal(np.sign(x), -pattern)


def test_gramian_matrix_accepts_non_unit_vectors():
    assert np.allclose(gramian_matrix(S12, [2.0, 0.0]), [[2.0, 0.0], [0.0, 0.0]])
    assert np.array_equal(gramian_matrix(S12, [1.0, 1.0]), build_psi(S12).as_float())
