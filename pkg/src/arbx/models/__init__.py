"""MILP formulations, LP text I/O and the relaxation solvers."""
from .builders import (
    FORMULATIONS,
    big_m_bound,
    build_aac,
    build_da,
    build_mcf,
    build_model,
    build_set_based,
    compute_big_m,
    cut_to_constraint,
    nearest_neighbor_path,
    xname,
)
from .cutting import LrResult, solve_lr_with_cuts, solve_relaxation, x_values
from .linear import Constraint, LinearModel, Variable
from .lpformat import export_lp, parse_lp
from .simplex import LpSolution, solve_lp

__all__ = [
    "FORMULATIONS",
    "Constraint",
    "LinearModel",
    "LpSolution",
    "LrResult",
    "Variable",
    "big_m_bound",
    "build_aac",
    "build_da",
    "build_mcf",
    "build_model",
    "build_set_based",
    "compute_big_m",
    "cut_to_constraint",
    "export_lp",
    "nearest_neighbor_path",
    "parse_lp",
    "solve_lp",
    "solve_lr_with_cuts",
    "solve_relaxation",
    "x_values",
    "xname",
]
