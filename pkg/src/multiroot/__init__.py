"""Multiple roots of nonlinear equations with known multiplicity.

A parameterised Newton-Secant iteration, four comparison methods, exact
convergence diagnostics at configurable precision and a basin-of-attraction
renderer.
"""

from .methods import MethodKind, MethodSpec, StepOutcome, step, theta, theta_exact
from .numerics import PrecisionConfig, scalar_from_decimal, with_precision
from .problems import PolynomialProblem, Problem, builtin, poly_taylor_at_root
from .solver import (
    ErrorConstant,
    ExactHit,
    SolverConfig,
    Trace,
    acoc,
    coc,
    empirical_error_ratio,
    error_constant,
    solve,
)

__all__ = [
    "ErrorConstant",
    "ExactHit",
    "MethodKind",
    "MethodSpec",
    "PolynomialProblem",
    "PrecisionConfig",
    "Problem",
    "SolverConfig",
    "StepOutcome",
    "Trace",
    "acoc",
    "builtin",
    "coc",
    "empirical_error_ratio",
    "error_constant",
    "poly_taylor_at_root",
    "scalar_from_decimal",
    "solve",
    "step",
    "theta",
    "theta_exact",
    "with_precision",
]
