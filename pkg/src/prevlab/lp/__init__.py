"""Exact rational linear programming with checkable certificates."""

from .kernels import backend
from .minimax import MixedStrategy, minimax, verify_minimax
from .model import (
    EQ,
    GE,
    LE,
    Constraint,
    Infeasible,
    LinProg,
    LpOutcome,
    Optimal,
    Unbounded,
    check_farkas,
    check_optimal,
    check_outcome,
    check_ray,
    is_feasible,
)
from .simplex import LpSession
from .simplex import solve as lp_solve

__all__ = [
    "EQ", "GE", "LE", "Constraint", "LpSession", "Infeasible", "LinProg", "LpOutcome", "MixedStrategy",
    "Optimal", "Unbounded", "backend", "check_farkas", "check_optimal", "check_outcome",
    "check_ray", "is_feasible", "lp_solve", "minimax", "verify_minimax",
]
