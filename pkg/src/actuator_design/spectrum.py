"""Problem definition: validated spectra, symmetric systems and unit vectors."""

from dataclasses import dataclass
from fractions import Fraction
import math
from numbers import Rational

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    DuplicateEigenvalue,
    EmptyInput,
    InternalInvariantViolation,
    InvalidInput,
    NonPositiveEigenvalue,
    NotSymmetric,
    NotUnitVector,
)
from .linalg import jacobi_eigh, readonly

DUPLICATE_REL_GAP = 1e-10
MAX_DIM_FLOAT = 12
MAX_DIM_EXACT = 10
UNIT_NORM_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-9


def to_fraction(value):
    """Exact rational for ``value``; floats are read through their shortest repr.

    ``0.1`` becomes ``1/10`` rather than its binary expansion, which is what a
    user typing decimals into a problem file means.
    """
    if isinstance(value, bool):
        raise InvalidInput(f"not a number: {value!r}")
    if isinstance(value, (Fraction, int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInput(f"non-finite value: {value!r}")
    return Fraction(repr(value))


def _check_values(values):
    if len(values) == 0:
        raise EmptyInput("spectrum must contain at least one eigenvalue")
    exact = all(isinstance(v, Fraction) for v in values)
    for v in values:
        if not exact and not math.isfinite(v):
            raise InvalidInput(f"non-finite eigenvalue {v!r}")
        if v <= 0:
            raise NonPositiveEigenvalue(
                f"eigenvalue {v} is not positive; the system is not completely unstable"
            )
    for lo, hi in zip(values, values[1:]):
        if hi < lo:
            raise InternalInvariantViolation("spectrum is not sorted")
        if hi - lo <= DUPLICATE_REL_GAP * hi:
            raise DuplicateEigenvalue(
                f"eigenvalues {lo} and {hi} coincide within relative gap {DUPLICATE_REL_GAP}"
            )
    cap = MAX_DIM_EXACT if exact else MAX_DIM_FLOAT
    if len(values) > cap:
        mode = "rational" if exact else "float"
        raise DimensionTooLarge(f"n={len(values)} exceeds the {mode}-mode cap of {cap}")


@dataclass(frozen=True)
class Spectrum:
    """Strictly increasing positive eigenvalues ``0 < l_1 < ... < l_n``.

    Entries are either all ``float`` (float mode) or all ``Fraction``
    (exact mode).  Build through :func:`validate_spectrum`.
    """

    eigenvalues: tuple

    def __post_init__(self):
        _check_values(self.eigenvalues)

    @property
    def n(self):
        return len(self.eigenvalues)

    @property
    def exact(self):
        return all(isinstance(v, Fraction) for v in self.eigenvalues)

    @property
    def values(self):
        """Eigenvalues as a float array."""
        return np.array([float(v) for v in self.eigenvalues])

    @property
    def diag(self):
        return np.diag(self.values)

    def as_float(self):
        if not self.exact:
            return self
        return Spectrum(tuple(float(v) for v in self.eigenvalues))


def validate_spectrum(values, exact=False):
    """Validate and sort a list of eigenvalues.

    Violations are rejected, never repaired.  With ``exact=True`` every value
    is converted to a ``Fraction`` first.

    Raises:
        EmptyInput, NonPositiveEigenvalue, DuplicateEigenvalue, DimensionTooLarge
    """
    if isinstance(values, Spectrum):
        values = values.eigenvalues
    values = list(values)
    if not values:
        raise EmptyInput("spectrum must contain at least one eigenvalue")
    if exact:
        converted = [to_fraction(v) for v in values]
    else:
        converted = []
        for v in values:
            if isinstance(v, bool):
                raise InvalidInput(f"not a number: {v!r}")
            try:
                converted.append(float(v))
            except (TypeError, ValueError) as exc:
                raise InvalidInput(f"not a number: {v!r}") from exc
    return Spectrum(tuple(sorted(converted)))


def unit_vector(entries, tol=UNIT_NORM_TOL):
    """Read-only float array with Euclidean norm one (within ``tol``)."""
    vec = np.array(entries, dtype=float).reshape(-1)
    if vec.size == 0:
        raise EmptyInput("empty vector")
    norm = np.linalg.norm(vec)
    if not abs(norm - 1.0) <= tol:
        raise NotUnitVector(f"vector norm {norm!r} differs from 1 by more than {tol}")
    return readonly(vec)


def normalize(entries):
    vec = np.array(entries, dtype=float).reshape(-1)
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise InvalidInput("cannot normalize the zero vector")
    return readonly(vec / norm)


@dataclass(frozen=True)
class SymmetricSystem:
    """``A = basis @ diag(spectrum) @ basis.T`` with orthogonal ``basis``."""

    matrix: np.ndarray
    basis: np.ndarray
    spectrum: Spectrum

    @property
    def n(self):
        return self.spectrum.n


def diagonalize(matrix):
    """Eigen-decompose a symmetric positive definite system matrix.

    Symmetry is checked exactly; the spectrum then goes through
    :func:`validate_spectrum`, so indefinite or degenerate matrices raise the
    corresponding spectrum error.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
        raise InvalidInput(f"system matrix must be square and non-empty, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("system matrix has non-finite entries")
    if np.abs(a - a.T).max() != 0.0:
        raise NotSymmetric("system matrix is not exactly symmetric")

    w, theta = jacobi_eigh(a)
    spectrum = validate_spectrum(w)
    scale = np.abs(a).max()
    ortho = np.abs(theta @ theta.T - np.eye(len(w))).max()
    recon = np.abs(theta @ np.diag(w) @ theta.T - a).max()
    if ortho > ORTHOGONALITY_TOL * max(1, len(w)) or recon > RECONSTRUCTION_TOL * scale:
        raise InternalInvariantViolation(
            f"eigendecomposition failed: orthogonality {ortho:.3e}, residual {recon:.3e}"
        )
    return SymmetricSystem(readonly(a), readonly(theta), spectrum)


def pull_back_actuator(system, b_diag):
    """Map a vector from diagonal coordinates back to the original ones (``basis @ b``)."""
    b_diag = np.asarray(b_diag, dtype=float).reshape(-1)
    if b_diag.size != system.n:
        raise DimensionMismatch(f"expected a vector of length {system.n}, got {b_diag.size}")
    return readonly(system.basis @ b_diag)


def push_forward(system, vec):
    """Inverse of :func:`pull_back_actuator`: original to diagonal coordinates."""
    vec = np.asarray(vec, dtype=float).reshape(-1)
    if vec.size != system.n:
        raise DimensionMismatch(f"expected a vector of length {system.n}, got {vec.size}")
    return readonly(system.basis.T @ vec)
