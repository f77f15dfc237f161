from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from actuator_design.errors import (
    DimensionMismatch, DimensionTooLarge, DuplicateEigenvalue, EmptyInput,
    NonPositiveEigenvalue, NotSymmetric, NotUnitVector,
)
from actuator_design.minimax import solve
from actuator_design.spectrum import (
    diagonalize, pull_back_actuator, push_forward, to_fraction, unit_vector, validate_spectrum,
)

from oracles import random_orthogonal


def rotation(deg):
    t = np.deg2rad(deg)
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def test_validate_sorted_input():
    s = validate_spectrum([1.0, 2.0])
    assert s.n == 2
    assert s.eigenvalues == (1.0, 2.0)


def test_validate_sorts():
    assert validate_spectrum([2.0, 1.0]).eigenvalues == (1.0, 2.0)


@pytest.mark.parametrize("values, exc", [
    ([1.0, -0.5], NonPositiveEigenvalue),
    ([0.0, 1.0], NonPositiveEigenvalue),
    ([1.0, 1.0 + 1e-13], DuplicateEigenvalue),
    ([3.0, 3.0], DuplicateEigenvalue),
    ([], EmptyInput),
    (list(range(1, 14)), DimensionTooLarge),
])
def test_validate_rejects(values, exc):
    with pytest.raises(exc):
        validate_spectrum(values)


def test_exact_mode_cap_is_lower():
    validate_spectrum(range(1, 13))
    with pytest.raises(DimensionTooLarge):
        validate_spectrum(range(1, 12), exact=True)


def test_exact_mode_reads_decimals_as_typed():
    s = validate_spectrum([0.1, "1/3", 2], exact=True)
    assert s.eigenvalues == (Fraction(1, 10), Fraction(1, 3), Fraction(2))
    assert s.exact
    assert to_fraction(0.25) == Fraction(1, 4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=12, unique=True))
def test_validate_is_idempotent(values):
    try:
        once = validate_spectrum(values)
    except DuplicateEigenvalue:
        return
    assert validate_spectrum(once.eigenvalues) == once


def test_diagonalize_diagonal_input():
    sys = diagonalize(np.diag([1.0, 2.0]))
    assert sys.spectrum.eigenvalues == pytest.approx((1.0, 2.0), abs=1e-15)
    assert np.allclose(np.abs(sys.basis), np.eye(2))


def test_diagonalize_rotated_round_trip():
    r = rotation(45)
    a = r @ np.diag([1.0, 2.0]) @ r.T
    a = (a + a.T) / 2
    sys = diagonalize(a)
    assert sys.spectrum.values == pytest.approx([1.0, 2.0], abs=1e-12)
    # columns agree with R(45) up to sign
    assert np.allclose(np.abs(sys.basis.T @ r), np.eye(2), atol=1e-12)
    recon = sys.basis @ np.diag(sys.spectrum.values) @ sys.basis.T
    assert np.abs(recon - a).max() <= 1e-9 * np.abs(a).max()


def test_diagonalize_indefinite():
    with pytest.raises(NonPositiveEigenvalue):
        diagonalize([[0.0, 1.0], [1.0, 0.0]])


def test_diagonalize_requires_exact_symmetry():
    with pytest.raises(NotSymmetric):
        diagonalize([[2.0, 1.0], [1.0 + 1e-15, 3.0]])


def test_pull_back_identity_and_rotation():
    sys = diagonalize(np.diag([1.0, 2.0]))
    assert np.allclose(np.abs(pull_back_actuator(sys, [0.6, 0.8])), [0.6, 0.8])
    r = rotation(90)
    a = r @ np.diag([1.0, 2.0]) @ r.T
    a = (a + a.T) / 2
    sys = diagonalize(a)
    b = pull_back_actuator(sys, [1.0, 0.0])
    assert np.allclose(np.abs(b), [0.0, 1.0], atol=1e-12)


def test_pull_back_dimension_mismatch():
    sys = diagonalize(np.diag([1.0, 2.0]))
    with pytest.raises(DimensionMismatch):
        pull_back_actuator(sys, [1.0, 0.0, 0.0])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 6))
def test_pull_back_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    theta = random_orthogonal(rng, n)
    lam = np.cumsum(rng.uniform(0.3, 2.0, n))
    a = theta @ np.diag(lam) @ theta.T
    sys = diagonalize((a + a.T) / 2)
    b = rng.standard_normal(n)
    b /= np.linalg.norm(b)
    back = pull_back_actuator(sys, b)
    assert np.linalg.norm(back) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(sys.basis.T @ back, b, atol=1e-12)
    assert np.allclose(push_forward(sys, back), b, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_phi_is_rotation_invariant(seed, n):
    rng = np.random.default_rng(seed)
    lam = np.cumsum(rng.uniform(0.3, 2.0, n))
    theta = random_orthogonal(rng, n)
    a = theta @ np.diag(lam) @ theta.T
    phi_rot = solve(diagonalize((a + a.T) / 2).spectrum).phi
    phi_diag = solve(validate_spectrum(lam)).phi
    assert phi_rot == pytest.approx(phi_diag, rel=1e-9)


def test_unit_vector():
    assert unit_vector([0.6, 0.8]).tolist() == [0.6, 0.8]
    with pytest.raises(NotUnitVector):
        unit_vector([1.0, 1.0])
    v = unit_vector([1.0])
    with pytest.raises(ValueError):
        v[0] = 2.0
