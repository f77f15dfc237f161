"""Gradient ascent of ``xi(b) = lambda_min W(b)`` on the unit sphere.

This is an independent numerical route to the optimal actuators: it never
touches ``Psi^{-1}``, only ``W(b)``, its smallest eigenpair and the
derivative ``D xi(b)[v] = 2 v^T W(x) b``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotConverged, ZeroEntryActuator
from .gramian import build_gramian, gramian_matrix, smallest_eigenpair
from .linalg import jacobi_eigh
from .spectrum import unit_vector

MIN_STEP = 1e-14
ARMIJO = 1e-4
# relative size of eigenvalue rounding noise in xi
XI_NOISE = 1e-13
RESTART_MIN_ENTRY = 1e-3


def xi(spectrum, b):
    """Potential ``lambda_min W(b)``; exactly zero when ``b`` has a zero entry."""
    b = unit_vector(b)
    if np.any(b == 0.0):
        return 0.0
    return smallest_eigenpair(build_gramian(spectrum, b)).value


def _eigenpair(spectrum, b):
    w, v = jacobi_eigh(gramian_matrix(spectrum, b))
    return float(w[0]), v[:, 0]


def _tangent_gradient(spectrum, b, x):
    g = 2.0 * gramian_matrix(spectrum, x) @ b
    return g - (g @ b) * b


def _require_z(b):
    if np.any(np.asarray(b) == 0.0):
        raise ZeroEntryActuator("actuator has a zero entry; xi is not differentiable there")


def euclidean_gradient(spectrum, b):
    """``2 W(x) b`` with ``x`` the bottom eigenvector of ``W(b)``.

    Its tangential part (see :func:`riemannian_gradient`) is the gradient of
    ``xi`` on the sphere.  The sign of ``x`` cancels.
    """
    b = unit_vector(b)
    _require_z(b)
    _, x = _eigenpair(spectrum, b)
    return 2.0 * gramian_matrix(spectrum, x) @ b


def riemannian_gradient(spectrum, b):
    b = np.asarray(b, dtype=float)
    g = euclidean_gradient(spectrum, b)
    return g - (g @ b) * b


def directional_derivative(spectrum, b, v):
    return float(np.asarray(v, dtype=float) @ euclidean_gradient(spectrum, b))


def critical_residual(spectrum, b):
    """Stationarity residuals ``(||W(b)x - xi x||, ||W(x)b - xi b||)``."""
    b = unit_vector(b)
    _require_z(b)
    lam, x = _eigenpair(spectrum, b)
    r1 = np.linalg.norm(gramian_matrix(spectrum, b) @ x - lam * x)
    r2 = np.linalg.norm(gramian_matrix(spectrum, x) @ b - lam * b)
    return float(r1), float(r2)


@dataclass(frozen=True)
class AscentConfig:
    initial: np.ndarray
    step_size: float = 1.0
    max_iterations: int = 10_000
    tolerance: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass
class AscentTrace:
    iterates: list = field(default_factory=list)  # (b, xi, gradient norm)
    converged: bool = False

    @property
    def final(self):
        return self.iterates[-1][0]

    @property
    def final_xi(self):
        return self.iterates[-1][1]

    @property
    def iterations(self):
        return len(self.iterates) - 1


def ascend(spectrum, cfg, strict=False):
    """Riemannian gradient ascent with renormalisation and backtracking.

    A step is accepted when it stays in the set of actuators without zero
    entries and raises ``xi`` by the Armijo amount (or, once that amount is
    below rounding level, does not lower it by more than ``XI_NOISE`` relative and
    shrinks the gradient); otherwise the step is halved
    until it drops below ``MIN_STEP``.  The step doubles after every
    acceptance.

    Returns the full trace.  ``strict=True`` raises :class:`NotConverged`
    (carrying the trace) when the gradient tolerance is not met.
    """
    b = np.array(unit_vector(cfg.initial))
    _require_z(b)
    step = cfg.step_size
    trace = AscentTrace()

    val, x = _eigenpair(spectrum, b)
    rg = _tangent_gradient(spectrum, b, x)
    for _ in range(cfg.max_iterations + 1):
        gnorm = float(np.linalg.norm(rg))
        trace.iterates.append((b.copy(), val, gnorm))
        if gnorm <= cfg.tolerance:
            trace.converged = True
            break
        if len(trace.iterates) > cfg.max_iterations:
            break

        accepted = False
        while step >= MIN_STEP:
            cand = b + step * rg
            cand /= np.linalg.norm(cand)
            if np.all(cand != 0.0):
                cval, cx = _eigenpair(spectrum, cand)
                crg = _tangent_gradient(spectrum, cand, cx)
                gain = ARMIJO * step * gnorm * gnorm
                if gain >= XI_NOISE * val:
                    accepted = cval >= val + gain
                else:
                    # increase below rounding level: require progress in the gradient instead
                    accepted = (cval >= val * (1.0 - XI_NOISE)
                                and np.linalg.norm(crg) < gnorm)
                if accepted:
                    break
            step *= 0.5
        if not accepted:
            break
        b, val, x, rg = cand, cval, cx, crg
        step *= 2.0

    if strict and not trace.converged:
        raise NotConverged(
            f"gradient norm {trace.iterates[-1][2]:.3e} above {cfg.tolerance:.1e} "
            f"after {trace.iterations} iterations",
            trace,
        )
    return trace


def random_actuator(rng, n, min_entry=RESTART_MIN_ENTRY):
    """Uniform point on the sphere with every ``|b_i| >= min_entry``."""
    while True:
        b = rng.standard_normal(n)
        b /= np.linalg.norm(b)
        if np.all(np.abs(b) >= min_entry):
            return b


def multistart(spectrum, restarts, seed=0, step_size=1.0, max_iterations=10_000,
               tolerance=1e-10):
    """Run ``restarts`` independent ascents from random starting actuators."""
    rng = np.random.default_rng(seed)
    traces = []
    for _ in range(restarts):
        cfg = AscentConfig(random_actuator(rng, spectrum.n), step_size,
                           max_iterations, tolerance, seed)
        traces.append(ascend(spectrum, cfg))
    return traces
