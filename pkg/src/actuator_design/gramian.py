"""Infinite-horizon Gramian ``W(b) = diag(b) Psi diag(b)`` and its eigen-analysis."""

from dataclasses import dataclass
import math

import numpy as np

from .cauchy import build_psi
from .errors import DimensionMismatch
from .linalg import canonical_sign, jacobi_eigh, readonly
from .spectrum import Spectrum, unit_vector

LYAPUNOV_TOL = 1e-10


def gramian_matrix(spectrum, b):
    """``W(b)`` as a float array for any (not necessarily unit) vector ``b``."""
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.size != spectrum.n:
        raise DimensionMismatch(f"actuator has length {b.size}, spectrum has n={spectrum.n}")
    psi = build_psi(spectrum).as_float()
    return np.outer(b, b) * psi


@dataclass(frozen=True)
class Eigenpair:
    value: float
    vector: np.ndarray


@dataclass(frozen=True)
class Gramian:
    spectrum: Spectrum
    b: np.ndarray
    matrix: np.ndarray

    @property
    def n(self):
        return self.spectrum.n

    @property
    def singular(self):
        return bool(np.any(self.b == 0.0))

    def lyapunov_residual(self):
        """``||L W + W L - b b^T||_max / ||b b^T||_max`` with ``L = diag(spectrum)``."""
        lam = self.spectrum.values
        w = self.matrix
        bb = np.outer(self.b, self.b)
        resid = lam[:, None] * w + w * lam[None, :] - bb
        return float(np.abs(resid).max() / np.abs(bb).max())

    def eigh(self):
        return jacobi_eigh(self.matrix)


def build_gramian(spectrum, b):
    """Gramian for a unit actuator ``b``: ``W[i][j] = b_i b_j / (l_i + l_j)``.

    Raises:
        DimensionMismatch: if ``len(b) != n``.
        NotUnitVector: if ``b`` is not on the unit sphere.
    """
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.size != spectrum.n:
        raise DimensionMismatch(f"actuator has length {b.size}, spectrum has n={spectrum.n}")
    b = unit_vector(b)
    return Gramian(spectrum, b, readonly(gramian_matrix(spectrum, b)))


def smallest_eigenpair(gramian):
    """Smallest eigenvalue of ``W(b)`` with a unit eigenvector.

    The vector is normalised so that its first nonzero entry is positive.
    """
    w, v = jacobi_eigh(gramian.matrix)
    value = float(w[0])
    if gramian.singular:
        # exact kernel: W is PSD, numerical noise must not push it below zero
        value = 0.0
    vec = canonical_sign(v[:, 0])
    return Eigenpair(value, readonly(vec / np.linalg.norm(vec)))


def worst_energy(gramian):
    """Largest steering energy over unit initial states, ``1/lambda_min W(b)``.

    Singular Gramians give ``math.inf``.
    """
    if gramian.singular:
        return math.inf
    value = smallest_eigenpair(gramian).value
    if value <= 0.0:
        return math.inf
    return 1.0 / value
