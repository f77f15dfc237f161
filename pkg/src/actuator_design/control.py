"""Minimum-energy steering to the origin and forward simulation.

The open-loop law ``u(t) = -b^T exp(-L t) W_T^{-1} x0`` is exact but cannot
be simulated forward as is: the plant is completely unstable, so any
rounding in ``x`` grows like ``exp(l_n t)``.  The simulator therefore
re-plans the same law from the measured state at the start of every segment
of length about ``1/l_n``.  In exact arithmetic this reproduces the
open-loop control; numerically it keeps the error growth per segment below
``e**2``.
"""

from dataclasses import dataclass
import csv
import io
import math

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DimensionMismatch, HorizonTooShort, SingularGramian, SpectralRatioTooLarge
from .gramian import build_gramian, worst_energy
from .minimax import _energy_unchecked
from .spectrum import unit_vector

MAX_SPECTRAL_RATIO = 1e3
TERMINAL_TOL = 1e-6
RTOL = 1e-10
ATOL = 1e-15
GRID_DENSITY = 100  # trapezoid intervals per 1/l_n


def default_horizon(spectrum):
    return 40.0 / spectrum.values[0]


def finite_gramian(lam, b, tau):
    """``int_0^tau exp(-L s) b b^T exp(-L s) ds`` in closed form."""
    rate = lam[:, None] + lam[None, :]
    return np.outer(b, b) * (-np.expm1(-rate * tau)) / rate


def open_loop_control(spectrum, b, x0, horizon):
    """The open-loop minimum-energy law as a vectorised function of time."""
    lam = spectrum.values
    b = np.asarray(b, dtype=float)
    costate = np.linalg.solve(finite_gramian(lam, b, horizon), np.asarray(x0, dtype=float))

    def u(t):
        t = np.asarray(t, dtype=float)
        return -(np.exp(-np.multiply.outer(t, lam)) * b) @ costate

    return u


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    states: np.ndarray  # shape (len(t), n)
    controls: np.ndarray
    energy: float
    horizon: float

    @property
    def terminal_norm(self):
        return float(np.linalg.norm(self.states[-1]))

    @property
    def reached(self):
        return self.terminal_norm <= TERMINAL_TOL

    def to_csv(self, fh=None, basis=None):
        """Write columns ``t, x_1..x_n, u``; ``basis`` maps states to original coordinates."""
        states = self.states if basis is None else self.states @ np.asarray(basis).T
        n = states.shape[1]
        own = fh is None
        if own:
            fh = io.StringIO()
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t"] + [f"x_{i + 1}" for i in range(n)] + ["u"])
        for ti, xi, ui in zip(self.t, states, self.controls):
            writer.writerow([repr(float(ti))] + [repr(float(v)) for v in xi] + [repr(float(ui))])
        if own:
            return fh.getvalue()
        return None


def _check_actuator(spectrum, b):
    b = unit_vector(b)
    if b.size != spectrum.n:
        raise DimensionMismatch(f"actuator has length {b.size}, spectrum has n={spectrum.n}")
    if np.any(b == 0.0):
        raise SingularGramian("actuator has a zero entry; W(b) is singular")
    return b


def min_energy_control(spectrum, b, x0, horizon=None, *, rtol=RTOL,
                       terminal_tol=TERMINAL_TOL, grid_density=GRID_DENSITY, strict=False):
    """Steer ``x' = L x + b u`` from ``x0`` to the origin at ``horizon`` with least energy.

    Energy is the trapezoid rule of ``u**2`` on the output grid.  If the final
    state misses ``terminal_tol`` the trajectory is still returned (check
    :attr:`Trajectory.reached`), unless ``strict`` is set, in which case
    :class:`HorizonTooShort` is raised with the trajectory attached.
    """
    lam = spectrum.values
    if lam[-1] / lam[0] > MAX_SPECTRAL_RATIO:
        raise SpectralRatioTooLarge(
            f"spectral ratio {lam[-1] / lam[0]:.3g} exceeds {MAX_SPECTRAL_RATIO:g}; "
            "forward simulation would be too stiff"
        )
    b = _check_actuator(spectrum, b)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.size != spectrum.n:
        raise DimensionMismatch(f"initial state has length {x0.size}, spectrum has n={spectrum.n}")
    if horizon is None:
        horizon = default_horizon(spectrum)
    if not horizon > 0:
        raise ValueError("horizon must be positive")

    seg_len = 1.0 / lam[-1]
    n_seg = max(1, int(math.floor(horizon / seg_len)))
    bounds = np.linspace(0.0, horizon, n_seg + 1)
    bounds[-1] = horizon

    ts, xs, us = [], [], []
    x = x0.copy()
    for k in range(n_seg):
        t0, t1 = bounds[k], bounds[k + 1]
        costate = np.linalg.solve(finite_gramian(lam, b, horizon - t0), x)

        def control(t, t0=t0, costate=costate):
            return -(np.exp(-np.multiply.outer(t - t0, lam)) * b) @ costate

        def rhs(t, y, control=control):
            return lam * y + b * control(t)

        m = max(2, int(math.ceil((t1 - t0) * grid_density * lam[-1])))
        grid = np.linspace(t0, t1, m + 1)
        sol = solve_ivp(rhs, (t0, t1), x, method="RK45", t_eval=grid,
                        rtol=rtol, atol=ATOL)
        if not sol.success:
            raise RuntimeError(f"integration failed on [{t0}, {t1}]: {sol.message}")
        keep = slice(0, None) if k == 0 else slice(1, None)
        ts.append(sol.t[keep])
        xs.append(sol.y.T[keep])
        us.append(np.atleast_1d(control(sol.t[keep])))
        x = sol.y[:, -1].copy()

    t = np.concatenate(ts)
    states = np.vstack(xs)
    controls = np.concatenate(us)
    energy = float(np.trapezoid(controls ** 2, t))
    traj = Trajectory(t, states, controls, energy, float(horizon))
    if traj.terminal_norm > terminal_tol and strict:
        raise HorizonTooShort(
            f"||x(T)|| = {traj.terminal_norm:.3e} exceeds {terminal_tol:.1e}", traj
        )
    return traj


def free_response(spectrum, x0, t):
    """State of the uncontrolled plant, ``exp(L t) x0``."""
    return np.exp(spectrum.values * t) * np.asarray(x0, dtype=float)


@dataclass(frozen=True)
class EnergyBoundReport:
    trials: int
    worst_energy: float
    max_energy: float
    max_ratio: float
    passed: bool


def verify_energy_bound(spectrum, b, trials=1000, seed=0, atol=1e-9):
    """Sample unit initial states and check none costs more than ``1/lambda_min W(b)``.

    The slack is ``atol`` scaled by ``max(1, worst)`` so it stays meaningful
    for large energies.
    """
    b = _check_actuator(spectrum, b)
    worst = worst_energy(build_gramian(spectrum, b))
    rng = np.random.default_rng(seed)
    energies = []
    for _ in range(trials):
        x = rng.standard_normal(spectrum.n)
        x /= np.linalg.norm(x)
        energies.append(_energy_unchecked(spectrum, x, b))
    max_e = max(energies) if energies else 0.0
    passed = all(e <= worst + atol * max(1.0, worst) for e in energies)
    return EnergyBoundReport(trials, worst, max_e, max_e / worst, passed)
