"""Optimal single actuator minimizing the worst-case control energy of ``x' = A x + b u``
for symmetric positive definite ``A``."""

from .cauchy import CauchyGram, build_psi, cauchy_det, checkerboard_conjugate, psi_inverse
from .control import Trajectory, min_energy_control, verify_energy_bound
from .gramian import Eigenpair, Gramian, build_gramian, smallest_eigenpair, worst_energy
from .minimax import MinimaxSolution, energy_at, positivity_certificate, solve
from .optimizer import AscentConfig, AscentTrace, ascend, critical_residual, euclidean_gradient, xi
from .spectrum import Spectrum, SymmetricSystem, diagonalize, pull_back_actuator, validate_spectrum

__all__ = [
    "AscentConfig", "AscentTrace", "CauchyGram", "Eigenpair", "Gramian", "MinimaxSolution",
    "Spectrum", "SymmetricSystem", "Trajectory", "ascend", "build_gramian", "build_psi",
    "cauchy_det", "checkerboard_conjugate", "critical_residual", "diagonalize", "energy_at",
    "euclidean_gradient", "min_energy_control", "positivity_certificate", "psi_inverse",
    "pull_back_actuator", "smallest_eigenpair", "solve", "validate_spectrum",
    "verify_energy_bound", "worst_energy", "xi",
]
