"""Finite-difference simulator for a reaction-diffusion system with Robin
boundary conditions, instrumented with a-priori bound checks."""

__version__ = "0.1.0"

from .mesh import Grid, build_interval, build_rectangle, integrate_boundary, integrate_volume
from .operator import RobinOperator, SolverError, apply, assemble, dirichlet_energy, solve_spd
from .spectral import EigenPair, certify_positivity, first_eigenpair, poincare_friedrichs_constant
from .stepper import ModelParams, StepControl, SystemState, Trajectory, nonnegativity_audit, run, step

__all__ = [
    "EigenPair", "Grid", "ModelParams", "RobinOperator", "SolverError", "StepControl", "SystemState",
    "Trajectory", "apply", "assemble", "build_interval", "build_rectangle", "certify_positivity",
    "dirichlet_energy", "first_eigenpair", "integrate_boundary", "integrate_volume",
    "nonnegativity_audit", "poincare_friedrichs_constant", "run", "solve_spd", "step",
]
