"""Cutting-plane loop for the linear relaxations."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..instance import Instance
from ..separation import CutInequality, FractionalSolution, find_violated_inequality, separate_all
from .builders import build_model, cut_to_constraint
from .linear import LinearModel
from .simplex import LpSolution, solve_lp

log = logging.getLogger(__name__)

__all__ = ["LrResult", "solve_lr_with_cuts", "solve_relaxation", "x_values"]


@dataclass
class LrResult:
    """Outcome of a cutting-plane run; unpacks as ``(value, cuts, rounds)``."""

    value: float
    cuts: int
    rounds: int
    status: str = "optimal"
    solution: LpSolution | None = None
    model: LinearModel | None = None
    cut_list: list[CutInequality] = field(default_factory=list)

    def __iter__(self):
        return iter((self.value, self.cuts, self.rounds))


def solve_relaxation(model: LinearModel, lp_solver: str = "simplex") -> LpSolution:
    if lp_solver == "simplex":
        return solve_lp(model)
    if lp_solver == "highs":
        from .highs import solve_lp_highs

        return solve_lp_highs(model)
    raise ValueError(f"unknown LP solver {lp_solver!r}")


def x_values(inst: Instance, sol: LpSolution) -> FractionalSolution:
    return FractionalSolution({(i, j): min(1.0, max(0.0, sol.values[f"x_{i}_{j}"])) for i, j, _ in inst.arcs})


def solve_lr_with_cuts(
    inst: Instance,
    tag: str,
    *,
    with_valid_ineqs: bool = True,
    big_m: int | None = None,
    batch: bool = False,
    lp_solver: str = "simplex",
    max_rounds: int = 10_000,
    model: LinearModel | None = None,
) -> LrResult:
    """Solve the relaxation of formulation ``tag``, adding violated cuts
    until none is found.

    The multi-commodity flow model has no cut family and is solved once.
    With ``batch`` every round adds one cut per target vertex instead of
    only the first one found.
    """
    if tag == "set":
        tag = "set-based"
    if tag not in ("set-based", "da", "aac", "mcf"):
        raise ValueError(f"unknown formulation {tag!r}")
    m = model.copy() if model is not None else build_model(inst, tag, with_valid_ineqs=with_valid_ineqs, big_m=big_m)
    cuts: list[CutInequality] = []
    rounds = 0
    while True:
        sol = solve_relaxation(m, lp_solver)
        rounds += 1
        if not sol.optimal:
            return LrResult(float("nan"), len(cuts), rounds, sol.status, sol, m, cuts)
        if tag == "mcf":
            break
        x = x_values(inst, sol)
        new = separate_all(inst, x) if batch else [c for c in [find_violated_inequality(inst, x)] if c]
        if not new:
            break
        for cut in new:
            row = cut_to_constraint(cut, f"cut_{len(cuts)}")
            m.add_constraint(row)
            cuts.append(cut)
        log.debug("round %d: LR %.6f, %d cuts", rounds, sol.objective, len(cuts))
        if rounds >= max_rounds:
            return LrResult(sol.objective, len(cuts), rounds, "iteration-limit", sol, m, cuts)
    return LrResult(sol.objective, len(cuts), rounds, "optimal", sol, m, cuts)
