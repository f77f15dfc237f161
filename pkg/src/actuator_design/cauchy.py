"""The Cauchy matrix ``Psi = [1/(l_i + l_j)]`` and its closed-form algebra.

Every routine works on either floats or ``Fraction`` entries; exact spectra
produce ``dtype=object`` arrays of Fractions so identities can be checked
bit-for-bit.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import EmptyInput, InvalidInput, LengthMismatch
from .linalg import readonly
from .spectrum import Spectrum


def _prod(items, start=1):
    out = start
    for item in items:
        out = out * item
    return out


def _matrix(rows, exact):
    if exact:
        out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, row in enumerate(rows):
            for j, val in enumerate(row):
                out[i, j] = val
        return out
    return np.array(rows, dtype=float)


@dataclass(frozen=True)
class CauchyGram:
    """``Psi`` for a spectrum, with exact determinant and inverse accessors."""

    spectrum: Spectrum
    entries: np.ndarray

    @property
    def n(self):
        return self.spectrum.n

    @property
    def exact(self):
        return self.spectrum.exact

    def det(self):
        lam = list(self.spectrum.eigenvalues)
        return cauchy_det(lam, lam)

    def inverse(self):
        return psi_inverse(self)

    def as_float(self):
        return self.entries.astype(float)


def build_psi(spectrum):
    """``Psi[i][j] = 1/(l_i + l_j)`` in the spectrum's arithmetic."""
    # exact flag is part of the key: Spectrum((1.0,)) == Spectrum((Fraction(1),))
    return _build_psi(spectrum, spectrum.exact)


@lru_cache(maxsize=256)
def _build_psi(spectrum, exact):
    lam = spectrum.eigenvalues
    one = Fraction(1) if exact else 1.0
    rows = [[one / (li + lj) for lj in lam] for li in lam]
    return CauchyGram(spectrum, readonly(_matrix(rows, exact)))


def cauchy_det(alphas, betas):
    """Determinant of the Cauchy matrix ``[1/(alpha_i + beta_j)]``.

    Uses the classical product form

        prod_{i<j} (alpha_j - alpha_i)(beta_j - beta_i) / prod_{i,j} (alpha_i + beta_j),

    which for ``alphas == betas`` reduces to
    ``prod_k 1/(2 a_k) * prod_{i<j} ((a_j - a_i)/(a_i + a_j))**2``.
    Strictly positive when both sequences are strictly increasing.
    """
    alphas = list(alphas)
    betas = list(betas)
    if not alphas or not betas:
        raise EmptyInput("cauchy_det needs at least one parameter per list")
    if len(alphas) != len(betas):
        raise LengthMismatch(f"{len(alphas)} alphas vs {len(betas)} betas")
    k = len(alphas)
    denom = _prod(a + b for a in alphas for b in betas)
    if any(a + b == 0 for a in alphas for b in betas):
        raise InvalidInput("alpha_i + beta_j must be nonzero")
    numer = _prod(
        (alphas[j] - alphas[i]) * (betas[j] - betas[i])
        for i in range(k)
        for j in range(i + 1, k)
    )
    return numer / denom


def inverse_scaling(spectrum):
    """Vector ``a`` with ``Psi^{-1} = diag(a) Psi diag(a)``.

    ``a_i = prod_k (l_i + l_k) / prod_{k != i} (l_i - l_k)``; its sign is
    ``(-1)**(n - i)`` (1-based ``i``), which yields the checkerboard pattern.
    """
    lam = spectrum.eigenvalues
    n = len(lam)
    return [
        _prod(lam[i] + lam[k] for k in range(n))
        / _prod(lam[i] - lam[k] for k in range(n) if k != i)
        for i in range(n)
    ]


@lru_cache(maxsize=256)
def _psi_inverse_cached(spectrum, exact):
    lam = spectrum.eigenvalues
    a = inverse_scaling(spectrum)
    n = len(lam)
    rows = [[a[i] * a[j] / (lam[i] + lam[j]) for j in range(n)] for i in range(n)]
    return readonly(_matrix(rows, exact))


def psi_inverse(psi):
    """Closed-form inverse of ``Psi``.

    Entry (i, j) is ``a_i a_j / (l_i + l_j)`` with ``a`` from
    :func:`inverse_scaling`; no elimination is performed.
    """
    if isinstance(psi, Spectrum):
        psi = build_psi(psi)
    return _psi_inverse_cached(psi.spectrum, psi.spectrum.exact)


def alternating_signs(n):
    """Diagonal of the alternating signature ``diag(-1, 1, -1, ...)``."""
    return np.array([(-1) ** (i + 1) for i in range(n)], dtype=int)


def signatures(n):
    """All ``2**n`` sign vectors, in a fixed lexicographic order."""
    for signs in product((1, -1), repeat=n):
        yield np.array(signs, dtype=int)


def checkerboard_conjugate(m):
    """``S m S`` for the alternating signature ``S``; entry (i,j) picks up ``(-1)**(i+j)``."""
    m = np.asarray(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise InvalidInput("checkerboard_conjugate expects a square matrix")
    s = alternating_signs(n)
    out = m.copy() if m.dtype == object else np.array(m, dtype=float)
    for i in range(n):
        for j in range(n):
            if s[i] * s[j] < 0:
                out[i, j] = -out[i, j]
    return out


def sign_pattern(m):
    """Entrywise sign as integers (works for Fraction arrays too)."""
    m = np.asarray(m)
    return np.array([int(x > 0) - int(x < 0) for x in m.ravel()], dtype=int).reshape(m.shape)
