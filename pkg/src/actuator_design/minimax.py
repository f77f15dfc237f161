"""Closed-form optimal actuator: worst-case energy, optimal actuator, all optimal pairs."""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .cauchy import alternating_signs, checkerboard_conjugate, psi_inverse, signatures
from .errors import DimensionMismatch, InternalInvariantViolation
from .linalg import readonly
from .spectrum import Spectrum, unit_vector

# 2**(12 + 1): every optimal pair for the largest float-mode dimension
DEFAULT_ARG_PHI_CAP = 8192


def positivity_certificate(spectrum):
    """Row sums of ``S Psi^{-1} S`` (``S`` the alternating signature).

    All entries are positive because ``S Psi^{-1} S`` is entrywise positive;
    a non-positive entry means an arithmetic bug and raises
    :class:`InternalInvariantViolation`.
    """
    conj = checkerboard_conjugate(psi_inverse(spectrum))
    zero = Fraction(0) if spectrum.exact else 0.0
    cert = [sum(row, zero) for row in conj]
    if not spectrum.exact:
        cert = [float(c) for c in cert]
    if any(not c > 0 for c in cert):
        raise InternalInvariantViolation(f"non-positive certificate entry in {cert}")
    return cert


@dataclass(frozen=True)
class MinimaxSolution:
    """``phi`` with the optimal actuator ``v_star`` and the optimal pairs.

    ``phi``, ``xi_star`` and ``v_star_squared`` are ``Fraction`` for exact
    spectra; ``v_star`` is always a float array (it involves square roots).
    """

    spectrum: Spectrum
    phi: object
    xi_star: object
    v_star_squared: tuple
    v_star: np.ndarray
    arg_phi_cap: int = DEFAULT_ARG_PHI_CAP
    _pairs: tuple = field(default=None, repr=False, compare=False)

    @property
    def n(self):
        return self.spectrum.n

    @property
    def arg_phi_count(self):
        return 2 ** (self.n + 1)

    def iter_arg_phi(self):
        """Yield ``(x, b) = (+-sigma v*, sigma S v*)`` for every signature ``sigma``."""
        s = alternating_signs(self.n)
        for sigma in signatures(self.n):
            b = readonly(sigma * s * self.v_star)
            x = readonly(sigma * self.v_star)
            yield x, b
            yield readonly(-x), b

    @property
    def arg_phi(self):
        """All optimal pairs as a tuple, or a generator when above ``arg_phi_cap``."""
        if self._pairs is not None:
            return self._pairs
        return self.iter_arg_phi()


def solve(spectrum, arg_phi_cap=DEFAULT_ARG_PHI_CAP):
    cert = positivity_certificate(spectrum)
    phi = sum(cert[1:], cert[0])
    xi_star = 1 / phi
    v_sq = tuple(c / phi for c in cert)
    v_star = readonly(np.sqrt(np.array([float(v) for v in v_sq])))
    sol = MinimaxSolution(spectrum, phi, xi_star, v_sq, v_star, arg_phi_cap)
    if sol.arg_phi_count <= arg_phi_cap:
        object.__setattr__(sol, "_pairs", tuple(sol.iter_arg_phi()))
    return sol


def _energy_unchecked(spectrum, x, b):
    # x^T W(b)^{-1} x with W(b)^{-1} = diag(b)^{-1} Psi^{-1} diag(b)^{-1}; no norm checks
    x = np.asarray(x, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if x.size != spectrum.n or b.size != spectrum.n:
        raise DimensionMismatch(f"expected vectors of length {spectrum.n}")
    if np.any(b == 0.0):
        return math.inf
    y = x / b
    pinv = psi_inverse(spectrum).astype(float)
    return float(y @ pinv @ y)


def energy_at(spectrum, x, b):
    """Minimum steering energy ``x^T W(b)^{-1} x`` from unit state ``x`` with unit actuator ``b``.

    Any zero entry in ``b`` makes ``W(b)`` singular and the result is ``inf``.
    """
    return _energy_unchecked(spectrum, unit_vector(x), unit_vector(b))
