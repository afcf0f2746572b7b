"""Separation of the precedence-aware connectivity cuts.

For every non-root ``j`` the oracle restricts the support graph to the
vertices allowed to precede ``j`` and looks for a minimum ``(r, j)``-cut.
A cut of value below ``1 - EPS`` yields the violated row
``sum(x[i, k] for (i, k) crossing) >= 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .graph import DiGraph, allowed_predecessors, min_cut
from .instance import Instance

EPS = 1e-6

__all__ = [
    "EPS",
    "FractionalSolution",
    "CutInequality",
    "build_dj",
    "find_violated_inequality",
    "separate_all",
]


@dataclass(frozen=True)
class FractionalSolution:
    """Arc values ``x[(i, j)]``; arcs not listed are zero."""

    x: Mapping[tuple[int, int], float]

    @classmethod
    def from_arborescence(cls, arbo) -> "FractionalSolution":
        return cls({(i, j): 1.0 for j, i in arbo.parent.items()})

    def check(self, inst: Instance, tol: float = EPS) -> None:
        cost = inst.cost
        for arc, v in self.x.items():
            if arc not in cost:
                raise ValueError(f"arc {arc} is not in the instance")
            if v < -tol or v > 1 + tol:
                raise ValueError(f"x{arc} = {v} is outside [0, 1]")

    def value(self, arc: tuple[int, int]) -> float:
        return self.x.get(arc, 0.0)


@dataclass(frozen=True)
class CutInequality:
    """Row ``sum(x over crossing) >= 1`` with its violation at the separating point."""

    target: int
    S: frozenset[int]
    crossing: tuple[tuple[int, int], ...]
    value: float
    violation: float

    def lhs(self, x: FractionalSolution) -> float:
        return sum(x.value(a) for a in self.crossing)


def _as_solution(x) -> FractionalSolution:
    return x if isinstance(x, FractionalSolution) else FractionalSolution(dict(x))


def build_dj(inst: Instance, j: int, x) -> DiGraph:
    """Support graph on ``V_j`` weighted by ``x``.

    Every instance arc with both ends in ``V_j`` is kept, zero-valued ones
    included, so arc indices match the instance order restricted to ``V_j``.
    """
    x = _as_solution(x)
    vj = allowed_predecessors(inst, j)
    arcs = [(i, k, max(0.0, float(x.value((i, k))))) for i, k, _ in inst.arcs if i in vj and k in vj]
    return DiGraph.from_arcs(inst.n, arcs, vertices=vj)


def _cut_for(inst: Instance, j: int, x: FractionalSolution, eps: float) -> CutInequality | None:
    g = build_dj(inst, j, x)
    cut = min_cut(g, inst.root, j)
    if cut.value >= 1 - eps:
        return None
    vj = g.active
    S = vj - cut.source_side
    crossing = tuple((i, k) for i, k, _ in inst.arcs if i in vj and i not in S and k in S)
    return CutInequality(j, S, crossing, cut.value, 1.0 - cut.value)


def find_violated_inequality(inst: Instance, x, eps: float = EPS) -> CutInequality | None:
    """First violated cut in ascending target order, or ``None``."""
    x = _as_solution(x)
    for j in inst.vertices:
        if j == inst.root:
            continue
        cut = _cut_for(inst, j, x, eps)
        if cut is not None:
            return cut
    return None


def separate_all(inst: Instance, x, eps: float = EPS) -> list[CutInequality]:
    """One violated cut per target vertex, most violated first.

    Ties keep ascending target order. Cuts with identical crossing sets
    found for different targets are reported once.
    """
    x = _as_solution(x)
    found = []
    seen = set()
    for j in inst.vertices:
        if j == inst.root:
            continue
        cut = _cut_for(inst, j, x, eps)
        if cut is not None and cut.crossing not in seen:
            seen.add(cut.crossing)
            found.append(cut)
    found.sort(key=lambda c: -c.violation)
    return found
