"""Exact solvers: best-first branch-and-bound and brute-force oracles.

Both branch-and-bound solvers bound a node by the minimum-cost
arborescence of its restricted graph (forced arcs replace every other arc
into their head; forbidden arcs are dropped). That is a valid bound for
both problems because waiting times are non-negative.

Branching partitions the node's tree space:

* precedence violation ``(s, t)``: every feasible tree misses some arc of
  the tree path from ``t`` to ``s``; child ``k`` forbids the ``k``-th arc
  and forces the ones before it;
* waiting-time infeasibility: same scheme over the tree arcs of the
  positive cycle;
* feasible tree with positive waiting (WT only): the tree is recorded as
  an incumbent and excluded by the same scheme over all its arcs.
"""
from __future__ import annotations

import heapq
import itertools
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Iterable

from . import graph
from .evaluation import (
    Arborescence,
    TimedSolution,
    WaitInfeasibleError,
    check_precedences,
    entry_times,
    tree_path,
)
from .instance import Instance

log = logging.getLogger(__name__)

__all__ = [
    "SolverLimits",
    "SolveStats",
    "SizeLimitError",
    "brute_force_pcmca",
    "brute_force_pcmcawt",
    "solve_mca",
    "solve_pcmca",
    "solve_pcmcawt",
]


class SizeLimitError(ValueError):
    pass


@dataclass(frozen=True)
class SolverLimits:
    time_limit: float | None = 3600.0
    node_limit: int | None = None
    brute_force_cap: int = 8
    # node bound for the waiting-time solver: "mca", "da" or "auto"
    lp_bound: str = "auto"
    lp_solver: str = "highs"

    def __post_init__(self):
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node limit must be positive")
        if self.brute_force_cap <= 0:
            raise ValueError("brute-force cap must be positive")
        if self.lp_bound not in ("mca", "da", "auto"):
            raise ValueError(f"unknown node bound {self.lp_bound!r}")


@dataclass
class SolveStats:
    status: str = "optimal"  # optimal, feasible, infeasible or limit
    nodes: int = 0
    cuts: int = 0
    wall_time: float = 0.0
    incumbent: float | None = None
    lower_bound: float = 0.0
    upper_bound: float = math.inf

    def __post_init__(self):
        self.check()

    def check(self) -> None:
        if self.status == "optimal":
            assert self.lower_bound == self.upper_bound
        assert self.lower_bound <= self.upper_bound


# brute force ---------------------------------------------------------------


def _parent_maps(inst: Instance, limits: SolverLimits):
    if inst.n > limits.brute_force_cap:
        raise SizeLimitError(f"n={inst.n} exceeds the brute-force cap {limits.brute_force_cap}")
    others = [v for v in inst.vertices if v != inst.root]
    choices = [[i for i, _ in inst.in_arcs[v]] for v in others]
    root = inst.root
    for combo in itertools.product(*choices):
        parent = dict(zip(others, combo))
        # ancestors by walking up; a walk longer than n means a cycle
        anc: dict[int, frozenset[int]] = {root: frozenset()}
        ok = True
        for v in others:
            trail = []
            u = v
            while u not in anc and len(trail) <= inst.n:
                trail.append(u)
                u = parent[u]
            if u not in anc:
                ok = False
                break
            for x in reversed(trail):
                anc[x] = anc[parent[x]] | {parent[x]}
        if ok:
            yield parent, anc


def _respects(inst: Instance, anc) -> bool:
    return all(t not in anc[s] for s, t in inst.precedences)


def brute_force_pcmca(inst: Instance, limits: SolverLimits = SolverLimits()) -> Arborescence | None:
    """Cheapest precedence-feasible arborescence by full enumeration."""
    cost = inst.cost
    best = None
    for parent, anc in _parent_maps(inst, limits):
        if not _respects(inst, anc):
            continue
        c = sum(cost[p, v] for v, p in parent.items())
        if best is None or c < best[0]:
            best = (c, parent)
    if best is None:
        return None
    return Arborescence(inst.root, dict(sorted(best[1].items())), best[0])


def _naive_times(inst: Instance, parent) -> dict[int, int] | None:
    cons = [(p, v, inst.cost[p, v]) for v, p in parent.items()] + [(s, t, 0) for s, t in inst.precedences]
    d = dict.fromkeys(inst.vertices, 0)
    # a finite solution settles within n sweeps; any change after that is a positive cycle
    for _ in range(inst.n + 2):
        changed = False
        for u, v, c in cons:
            if d[u] + c > d[v]:
                d[v] = d[u] + c
                changed = True
        if not changed:
            return d
    return None


def brute_force_pcmcawt(inst: Instance, limits: SolverLimits = SolverLimits()) -> TimedSolution | None:
    """Best waiting-time objective by full enumeration."""
    cost = inst.cost
    best = None
    for parent, anc in _parent_maps(inst, limits):
        if not _respects(inst, anc):
            continue
        d = _naive_times(inst, parent)
        if d is None:
            continue
        obj = sum(d[v] - d[p] for v, p in parent.items())
        if best is None or obj < best[0]:
            best = (obj, parent, d)
    if best is None:
        return None
    obj, parent, d = best
    arbo = Arborescence(inst.root, dict(sorted(parent.items())), sum(cost[p, v] for v, p in parent.items()))
    w = {v: d[v] - d[p] - cost[p, v] for v, p in parent.items()}
    return TimedSolution(arbo, d, w, obj)


# branch and bound ------------------------------------------------------------


@dataclass(order=True)
class _Node:
    bound: float
    seq: int
    forced: frozenset = field(compare=False)
    forbidden: frozenset = field(compare=False)
    tree: Arborescence = field(compare=False)
    lp_done: bool = field(default=False, compare=False)
    lp_x: dict | None = field(default=None, compare=False)


class _Search:
    """Shared best-first machinery over (forced, forbidden) arc restrictions."""

    def __init__(self, inst: Instance, limits: SolverLimits):
        self.inst = inst
        self.limits = limits
        self.start = time.perf_counter()
        self.seq = itertools.count()
        self.heap: list[_Node] = []
        self.stats = SolveStats(status="limit", upper_bound=math.inf, lower_bound=0.0)
        self.best = None
        self.ub = math.inf

    def restricted_mca(self, forced: frozenset, forbidden: frozenset) -> Arborescence | None:
        inst = self.inst
        heads = {j: i for i, j in forced}
        arcs = [
            (i, j, c)
            for i, j, c in inst.arcs
            if (i, j) not in forbidden and heads.get(j, i) == i
        ]
        g = graph.DiGraph.from_arcs(inst.n, arcs)
        try:
            return graph.edmonds_mca(g, inst.root)
        except graph.UnreachableError:
            return None

    def push(self, forced: frozenset, forbidden: frozenset, floor: float = 0.0) -> None:
        tree = self.restricted_mca(forced, forbidden)
        if tree is None:
            return
        # a parent's bound stays valid for its restrictions
        bound = max(tree.cost, floor)
        if math.ceil(bound - 1e-6) >= self.ub:
            return
        heapq.heappush(self.heap, _Node(bound, next(self.seq), forced, forbidden, tree))

    def branch_on(self, node: _Node, arcs: Iterable[tuple[int, int]]) -> None:
        forced = node.forced
        for a in arcs:
            if a in forced:
                continue
            self.push(forced, node.forbidden | {a}, node.bound)
            forced = forced | {a}

    def out_of_budget(self) -> bool:
        lim = self.limits
        if lim.node_limit is not None and self.stats.nodes >= lim.node_limit:
            return True
        if lim.time_limit is not None and time.perf_counter() - self.start >= lim.time_limit:
            return True
        return False

    def finish(self, exhausted: bool) -> SolveStats:
        st = self.stats
        st.wall_time = time.perf_counter() - self.start
        st.upper_bound = self.ub
        st.incumbent = None if self.best is None else self.ub
        if exhausted or (self.heap and self.heap[0].bound >= self.ub):
            if self.best is None:
                st.status = "infeasible"
                st.lower_bound = math.inf
            else:
                st.status = "optimal"
                st.lower_bound = self.ub
        else:
            st.lower_bound = min(self.heap[0].bound, self.ub) if self.heap else self.ub
            st.status = "feasible" if self.best is not None else "limit"
        st.check()
        return st


def _nn_tree(inst: Instance) -> Arborescence | None:
    from .models.builders import nearest_neighbor_path

    path = nearest_neighbor_path(inst)
    if path is None:
        return None
    return Arborescence.from_parent(inst, {b: a for a, b in zip(path, path[1:])})


def solve_mca(inst: Instance) -> tuple[Arborescence | None, SolveStats]:
    """Plain minimum-cost arborescence, ignoring precedences."""
    start = time.perf_counter()
    try:
        tree = graph.edmonds_mca(graph.instance_graph(inst), inst.root)
    except graph.UnreachableError:
        st = SolveStats("infeasible", 1, 0, time.perf_counter() - start, None, math.inf, math.inf)
        return None, st
    st = SolveStats("optimal", 1, 0, time.perf_counter() - start, tree.cost, tree.cost, tree.cost)
    return tree, st


def solve_pcmca(inst: Instance, limits: SolverLimits = SolverLimits()) -> tuple[Arborescence | None, SolveStats]:
    """Optimal precedence-constrained arborescence by best-first search."""
    s = _Search(inst, limits)
    start_tree = _nn_tree(inst)
    if start_tree is not None:
        s.best, s.ub = start_tree, start_tree.cost
    s.push(frozenset(), frozenset())
    exhausted = True
    while s.heap:
        if s.heap[0].bound >= s.ub:
            break
        if s.out_of_budget():
            exhausted = False
            break
        node = heapq.heappop(s.heap)
        s.stats.nodes += 1
        bad = check_precedences(inst, node.tree)
        if not bad:
            # the restricted MCA is feasible, so it is this node's optimum
            if node.tree.cost < s.ub:
                s.best, s.ub = node.tree, node.tree.cost
            continue
        sv, tv = bad[0]
        s.stats.cuts += 1
        s.branch_on(node, tree_path(node.tree, tv, sv))
    stats = s.finish(exhausted)
    return s.best, stats


def _positive_cycle_arcs(inst: Instance, tree: Arborescence, cycle: tuple[int, ...]) -> list[tuple[int, int]]:
    arcs = []
    k = len(cycle)
    for a in range(k):
        u, v = cycle[a], cycle[(a + 1) % k]
        if tree.parent.get(v) == u:
            arcs.append((u, v))
    return arcs


class _DaBound:
    """Distance-accumulation relaxation with connectivity cuts, restricted
    to a node's fixings. Cuts found at any node are valid everywhere, so
    they go into one shared pool."""

    def __init__(self, inst: Instance, lp_solver: str):
        from .models.builders import build_da

        self.inst = inst
        self.lp_solver = lp_solver
        self.model = build_da(inst)
        self.names = [v.name for v in self.model.variables]
        self.col = {n: k for k, n in enumerate(self.names)}
        self.pool = 0
        self._mats = None

    def _matrices(self):
        if self._mats is None:
            import numpy as np
            from scipy.sparse import csr_matrix

            ub, eq = ([], [], [], []), ([], [], [], [])
            for con in self.model.constraints:
                rows, cols, vals, rhs = eq if con.sense == "=" else ub
                sign = -1.0 if con.sense == ">=" else 1.0
                r = len(rhs)
                for name, a in con.terms:
                    rows.append(r)
                    cols.append(self.col[name])
                    vals.append(sign * a)
                rhs.append(sign * con.rhs)
            n = len(self.names)

            def mat(part):
                rows, cols, vals, rhs = part
                return csr_matrix((vals, (rows, cols)), shape=(len(rhs), n)), np.array(rhs)

            cost = np.zeros(n)
            for name, a in self.model.objective.items():
                cost[self.col[name]] = a
            self._mats = (cost, *mat(ub), *mat(eq))
        return self._mats

    def _solve(self, fix: dict[str, tuple[float, float]]):
        if self.lp_solver == "simplex":
            from .models.simplex import solve_lp

            sol = solve_lp(self.model.with_bounds(fix))
            return (sol.objective, sol.values) if sol.optimal else (math.inf, None)
        from scipy.optimize import linprog

        cost, A_ub, b_ub, A_eq, b_eq = self._matrices()
        bounds = []
        for v in self.model.variables:
            lo, hi = fix.get(v.name, (v.lb, v.ub))
            bounds.append((lo, None if hi == math.inf else hi))
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
        if res.status != 0:
            return math.inf, None
        return float(res.fun), dict(zip(self.names, res.x.tolist()))

    def bound(self, forced: frozenset, forbidden: frozenset) -> tuple[float, dict | None, int]:
        from .models.builders import cut_to_constraint
        from .separation import FractionalSolution, find_violated_inequality

        inst = self.inst
        heads = {j for _, j in forced}
        fix = {}
        for i, j, _ in inst.arcs:
            if (i, j) in forced:
                fix[f"x_{i}_{j}"] = (1.0, 1.0)
            elif (i, j) in forbidden or j in heads:
                fix[f"x_{i}_{j}"] = (0.0, 0.0)
        added = 0
        while True:
            value, values = self._solve(fix)
            if values is None:
                return math.inf, None, added
            x = {(i, j): min(1.0, max(0.0, values[f"x_{i}_{j}"])) for i, j, _ in inst.arcs}
            cut = find_violated_inequality(inst, FractionalSolution(x))
            if cut is None:
                return value, x, added
            self.model.add_constraint(cut_to_constraint(cut, f"cut_{self.pool}"))
            self._mats = None
            self.pool += 1
            added += 1


def _local_search(inst: Instance, ts: TimedSolution, max_moves: int = 1000) -> TimedSolution:
    """First-improvement search re-hanging one subtree at a time."""
    for _ in range(max_moves):
        parent = dict(ts.arborescence.parent)
        children: dict[int, list[int]] = {}
        for v, p in parent.items():
            children.setdefault(p, []).append(v)
        improved = False
        for j in sorted(parent):
            below = {j}
            stack = [j]
            while stack:
                for c in children.get(stack.pop(), ()):
                    below.add(c)
                    stack.append(c)
            for i, _ in inst.in_arcs[j]:
                if i == parent[j] or i in below:
                    continue
                cand = Arborescence.from_parent(inst, {**parent, j: i})
                if check_precedences(inst, cand):
                    continue
                try:
                    other = entry_times(inst, cand)
                except WaitInfeasibleError:
                    continue
                if other.objective < ts.objective:
                    ts, improved = other, True
                    break
            if improved:
                break
        if not improved:
            break
    return ts


def _most_fractional(x: dict, tol: float = 1e-6) -> tuple[int, int] | None:
    best = None
    for arc in sorted(x):
        v = x[arc]
        if tol < v < 1 - tol:
            key = abs(v - 0.5)
            if best is None or key < best[0]:
                best = (key, arc)
    return None if best is None else best[1]


def solve_pcmcawt(inst: Instance, limits: SolverLimits = SolverLimits()) -> tuple[TimedSolution | None, SolveStats]:
    """Optimal arborescence with waiting times by best-first search."""
    s = _Search(inst, limits)
    use_lp = limits.lp_bound == "da" or (limits.lp_bound == "auto" and inst.n > 10)
    lp = _DaBound(inst, limits.lp_solver) if use_lp else None

    def offer(tree: Arborescence):
        try:
            ts = entry_times(inst, tree)
        except WaitInfeasibleError:
            return None
        if ts.objective < s.ub:
            ts = _local_search(inst, ts)
            s.best, s.ub = ts, ts.objective
        return ts

    for start in (_nn_tree(inst), solve_pcmca(inst, replace(limits, node_limit=1000))[0]):
        if start is not None:
            offer(start)
    s.push(frozenset(), frozenset())
    exhausted = True
    while s.heap:
        if s.heap[0].bound >= s.ub:
            break
        if s.out_of_budget():
            exhausted = False
            break
        node = heapq.heappop(s.heap)
        s.stats.nodes += 1
        tree = node.tree
        bad = check_precedences(inst, tree)
        ts = None
        if not bad:
            try:
                ts = entry_times(inst, tree)
            except WaitInfeasibleError as exc:
                cycle_arcs = _positive_cycle_arcs(inst, tree, exc.cycle) or tree.arcs
            else:
                offer(tree)
                if ts.objective == tree.cost:
                    continue
        if lp is not None and not node.lp_done:
            node.lp_done = True
            value, x, added = lp.bound(node.forced, node.forbidden)
            s.stats.cuts += added
            if value == math.inf or math.ceil(value - 1e-6) >= s.ub:
                continue
            if x is not None and _most_fractional(x) is None:
                # integral relaxation: its tree is this node's optimum
                lp_tree = Arborescence.from_parent(inst, {j: i for (i, j), v in x.items() if v > 0.5})
                got = offer(lp_tree)
                if got is not None and got.objective <= math.ceil(value - 1e-6):
                    continue
            node.lp_x = x
            if value > node.bound + 1e-6:
                node.bound = value
                heapq.heappush(s.heap, node)
                continue
        if node.lp_x is not None and (arc := _most_fractional(node.lp_x)) is not None:
            s.push(node.forced, node.forbidden | {arc}, node.bound)
            s.push(node.forced | {arc}, node.forbidden, node.bound)
        elif bad:
            sv, tv = bad[0]
            s.branch_on(node, tree_path(tree, tv, sv))
        elif ts is None:
            s.branch_on(node, cycle_arcs)
        else:
            s.branch_on(node, tree.arcs)
    stats = s.finish(exhausted)
    return s.best, stats
