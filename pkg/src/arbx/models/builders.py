"""MILP builders for the set-based, multi-commodity flow, distance
accumulation and adjusted arc-cost formulations.

Variable names follow one scheme across models: ``x_i_j`` arc selection,
``y_k_i_j`` commodity-``k`` flow, ``d_i`` entry time, ``w_i`` waiting time,
``z_i_j`` linearized ``d_i * x_i_j``.
"""
from __future__ import annotations

from ..graph import allowed_predecessors
from ..instance import Instance
from ..separation import CutInequality
from .linear import Constraint, LinearModel, Variable

__all__ = [
    "xname",
    "nearest_neighbor_path",
    "big_m_bound",
    "compute_big_m",
    "build_set_based",
    "build_mcf",
    "build_da",
    "build_aac",
    "build_model",
    "cut_to_constraint",
    "FORMULATIONS",
]


def xname(i: int, j: int) -> str:
    return f"x_{i}_{j}"


def nearest_neighbor_path(inst: Instance) -> list[int] | None:
    """Greedy precedence-respecting Hamiltonian path from the root.

    Each step takes the cheapest arc to an unvisited vertex whose required
    predecessors are all visited; ties go to the lowest vertex id. Returns
    ``None`` on a dead end.
    """
    visited = [False] * inst.n
    visited[inst.root] = True
    path = [inst.root]
    preds = inst.predecessors
    for _ in range(inst.n - 1):
        u = path[-1]
        best = None
        for v, c in inst.out_arcs[u]:
            if visited[v] or any(not visited[s] for s in preds[v]):
                continue
            if best is None or (c, v) < best:
                best = (c, v)
        if best is None:
            return None
        visited[best[1]] = True
        path.append(best[1])
    return path


def big_m_bound(inst: Instance) -> tuple[int, str]:
    """``(M, source)`` where source is ``"nearest-neighbor"`` or ``"fallback"``.

    The fallback sums the largest outgoing cost of every vertex. A simple
    path in the entry-time constraint graph leaves each vertex at most
    once, so this still bounds every minimal entry time.
    """
    path = nearest_neighbor_path(inst)
    if path is not None:
        cost = inst.cost
        return sum(cost[a, b] for a, b in zip(path, path[1:])), "nearest-neighbor"
    return sum(max((c for _, c in out), default=0) for out in inst.out_arcs), "fallback"


def compute_big_m(inst: Instance) -> int:
    return big_m_bound(inst)[0]


def _base(inst: Instance, tag: str, big_m: int | None = None) -> LinearModel:
    m = LinearModel(metadata={"formulation": tag, "instance": inst.name, "n": inst.n, "root": inst.root})
    if big_m is not None:
        m.metadata["M"] = big_m
    for i, j, _ in inst.arcs:
        m.add_variable(Variable(xname(i, j), "binary", 0.0, 1.0))
    for j in inst.vertices:
        if j != inst.root:
            m.add_row(f"indeg_{j}", [(xname(i, j), 1.0) for i, _ in inst.in_arcs[j]], "=", 1.0)
    return m


def _resolve_m(inst: Instance, big_m: int | None) -> tuple[int, str]:
    if big_m is not None:
        return big_m, "given"
    return big_m_bound(inst)


def _time_rows(m: LinearModel, inst: Instance, M: float, with_wait: bool) -> None:
    r = inst.root
    for j in inst.vertices:
        m.add_variable(Variable(f"d_{j}"))
    for j in inst.vertices:
        if with_wait and j != r:
            m.add_variable(Variable(f"w_{j}"))
    m.add_row("droot", [(f"d_{r}", 1.0)], "=", 0.0)
    for i, j, c in inst.arcs:
        # d_j >= d_i - M + (M + c) x_ij
        m.add_row(f"time_{i}_{j}", [(f"d_{j}", 1.0), (f"d_{i}", -1.0), (xname(i, j), -(M + c))], ">=", -M)
    if with_wait:
        for i, j, c in inst.arcs:
            # w_j >= d_j - d_i - M + (M - c) x_ij
            m.add_row(
                f"wait_{i}_{j}",
                [(f"w_{j}", 1.0), (f"d_{j}", -1.0), (f"d_{i}", 1.0), (xname(i, j), -(M - c))],
                ">=",
                -M,
            )
    for s, t in inst.precedences:
        m.add_row(f"prec_{s}_{t}", [(f"d_{t}", 1.0), (f"d_{s}", -1.0)], ">=", 0.0)


def _wt_objective(m: LinearModel, inst: Instance) -> None:
    obj = {xname(i, j): float(c) for i, j, c in inst.arcs}
    for j in inst.vertices:
        if j != inst.root:
            obj[f"w_{j}"] = 1.0
    m.set_objective(obj)


def build_set_based(inst: Instance) -> LinearModel:
    """In-degree rows only; connectivity cuts are added lazily."""
    m = _base(inst, "set-based")
    m.set_objective({xname(i, j): float(c) for i, j, c in inst.arcs})
    return m


def build_mcf(inst: Instance, big_m: int | None = None) -> LinearModel:
    M, source = _resolve_m(inst, big_m)
    m = _base(inst, "mcf", M)
    m.metadata["M_source"] = source
    r = inst.root
    for k in inst.vertices:
        if k == r:
            continue
        vk = allowed_predecessors(inst, k)
        arcs_k = [(i, j) for i, j, _ in inst.arcs if i in vk and j in vk]
        for i, j in arcs_k:
            m.add_variable(Variable(f"y_{k}_{i}_{j}", "binary", 0.0, 1.0))
        out_k: dict[int, list[str]] = {v: [] for v in vk}
        in_k: dict[int, list[str]] = {v: [] for v in vk}
        for i, j in arcs_k:
            out_k[i].append(f"y_{k}_{i}_{j}")
            in_k[j].append(f"y_{k}_{i}_{j}")
        for i in sorted(vk):
            rhs = 1.0 if i == r else -1.0 if i == k else 0.0
            terms = [(y, 1.0) for y in out_k[i]] + [(y, -1.0) for y in in_k[i]]
            m.add_row(f"flow_{k}_{i}", terms, "=", rhs)
    _time_rows(m, inst, M, with_wait=True)
    for k in inst.vertices:
        if k == r:
            continue
        vk = allowed_predecessors(inst, k)
        for i, j, _ in inst.arcs:
            if i in vk and j in vk:
                m.add_row(f"link_{k}_{i}_{j}", [(f"y_{k}_{i}_{j}", 1.0), (xname(i, j), -1.0)], "<=", 0.0)
    _wt_objective(m, inst)
    return m


def build_da(inst: Instance, big_m: int | None = None) -> LinearModel:
    M, source = _resolve_m(inst, big_m)
    m = _base(inst, "da", M)
    m.metadata["M_source"] = source
    _time_rows(m, inst, M, with_wait=True)
    _wt_objective(m, inst)
    return m


def build_aac(inst: Instance, with_valid_ineqs: bool = True, big_m: int | None = None) -> LinearModel:
    M, source = _resolve_m(inst, big_m)
    m = _base(inst, "aac", M)
    m.metadata["M_source"] = source
    m.metadata["valid_ineqs"] = with_valid_ineqs
    _time_rows(m, inst, M, with_wait=False)
    for i, j, _ in inst.arcs:
        m.add_variable(Variable(f"z_{i}_{j}"))
    for i, j, _ in inst.arcs:
        m.add_row(f"zd_{i}_{j}", [(f"z_{i}_{j}", 1.0), (f"d_{i}", -1.0)], "<=", 0.0)
    for i, j, _ in inst.arcs:
        m.add_row(f"zx_{i}_{j}", [(f"z_{i}_{j}", 1.0), (xname(i, j), -float(M))], "<=", 0.0)
    if with_valid_ineqs:
        for j in inst.vertices:
            if j == inst.root:
                continue
            terms = [(f"z_{i}_{j}", 1.0) for i, _ in inst.in_arcs[j]]
            terms += [(xname(i, j), float(c)) for i, c in inst.in_arcs[j]]
            terms.append((f"d_{j}", -1.0))
            m.add_row(f"vi_{j}", terms, "<=", 0.0)
    obj = {f"d_{j}": 1.0 for j in inst.vertices if j != inst.root}
    obj.update({f"z_{i}_{j}": -1.0 for i, j, _ in inst.arcs})
    m.set_objective(obj)
    return m


FORMULATIONS = ("set-based", "mcf", "da", "aac")


def build_model(inst: Instance, tag: str, *, with_valid_ineqs: bool = True, big_m: int | None = None) -> LinearModel:
    if tag in ("set", "set-based"):
        return build_set_based(inst)
    if tag == "mcf":
        return build_mcf(inst, big_m)
    if tag == "da":
        return build_da(inst, big_m)
    if tag == "aac":
        return build_aac(inst, with_valid_ineqs, big_m)
    raise ValueError(f"unknown formulation {tag!r}")


def cut_to_constraint(cut: CutInequality, name: str | None = None) -> Constraint:
    """Row ``sum(x over crossing) >= 1``.

    An empty crossing set gives the infeasible row ``0 >= 1``; it is kept
    as such so the LP reports infeasibility instead of dropping the cut.
    """
    if name is None:
        name = f"cut_{cut.target}_" + "_".join(str(v) for v in sorted(cut.S))
    return Constraint(name, tuple((xname(i, k), 1.0) for i, k in cut.crossing), ">=", 1.0)

