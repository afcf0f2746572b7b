"""Solution checking and objective values for MCA, PCMCA and PCMCA-WT."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .instance import Instance

__all__ = [
    "Arborescence",
    "TimedSolution",
    "Violation",
    "WaitInfeasibleError",
    "validate_arborescence",
    "check_precedences",
    "entry_times",
    "objective_pcmca",
    "objective_pcmcawt",
    "relative_gap",
    "tree_path",
]


@dataclass(frozen=True)
class Arborescence:
    """Parent map over the non-root vertices, plus its arc-cost sum."""

    root: int
    parent: Mapping[int, int]
    cost: int | float

    @classmethod
    def from_parent(cls, inst: Instance, parent: Mapping[int, int]) -> "Arborescence":
        parent = {int(j): int(i) for j, i in sorted(parent.items())}
        return cls(inst.root, parent, sum(inst.cost[i, j] for j, i in parent.items()))

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for j, i in sorted(self.parent.items())]

    def path_to(self, v: int) -> list[int]:
        """Vertices on the root-to-``v`` path, root first."""
        path = [v]
        while v != self.root:
            v = self.parent[v]
            path.append(v)
        path.reverse()
        return path


@dataclass(frozen=True)
class TimedSolution:
    """An arborescence with entry times ``d`` and waiting times ``w``."""

    arborescence: Arborescence
    d: Mapping[int, Fraction | int]
    w: Mapping[int, Fraction | int]
    objective: Fraction | int

    @property
    def cost(self):
        return self.arborescence.cost


@dataclass(frozen=True)
class Violation:
    kind: str  # "coverage", "unknown-vertex", "missing-arc" or "cycle"
    vertices: tuple[int, ...]
    message: str


class WaitInfeasibleError(ValueError):
    """The entry-time constraints of a tree contain a positive cycle."""

    def __init__(self, cycle: tuple[int, ...]):
        self.cycle = cycle
        super().__init__(f"no finite entry times: positive cycle through {list(cycle)}")


def validate_arborescence(inst: Instance, parent: Mapping[int, int]) -> list[Violation]:
    """Return the list of problems with ``parent``; empty means valid.

    Each cycle is reported once (vertices hanging below a cycle are not
    reported separately), so a single wrong parent yields one violation.
    """
    out: list[Violation] = []
    n, root = inst.n, inst.root
    keys = set(parent)
    for v in sorted(keys):
        if v == root or not 0 <= v < n:
            out.append(Violation("coverage", (v,), f"vertex {v} must not have a parent"))
    for v in range(n):
        if v != root and v not in keys:
            out.append(Violation("coverage", (v,), f"vertex {v} has no parent"))
    cost = inst.cost
    ok_parent = {}
    for v in sorted(keys):
        if v == root or not 0 <= v < n:
            continue
        p = parent[v]
        if not 0 <= p < n:
            out.append(Violation("unknown-vertex", (v,), f"parent {p} of {v} is not a vertex"))
        elif (p, v) not in cost:
            out.append(Violation("missing-arc", (v,), f"arc ({p}, {v}) is not in the graph"))
            ok_parent[v] = p
        else:
            ok_parent[v] = p
    # cycle detection over the parent relation (even along missing arcs)
    state = dict.fromkeys(ok_parent, 0)  # 0 unseen, 1 on stack, 2 done
    for v0 in sorted(ok_parent):
        if state[v0]:
            continue
        trail = []
        v = v0
        while v in state and state[v] == 0:
            state[v] = 1
            trail.append(v)
            v = ok_parent[v]
        if v in state and state[v] == 1:
            cyc = trail[trail.index(v):]
            out.append(Violation("cycle", tuple(cyc), f"cycle through {cyc}"))
        for x in trail:
            state[x] = 2
    return out


def _depths(arbo: Arborescence) -> dict[int, int]:
    depth = {arbo.root: 0}
    for v in arbo.parent:
        stack = []
        while v not in depth:
            stack.append(v)
            v = arbo.parent[v]
        d = depth[v]
        while stack:
            d += 1
            depth[stack.pop()] = d
    return depth


def check_precedences(inst: Instance, arbo: Arborescence) -> list[tuple[int, int]]:
    """Precedences ``(s, t)`` whose ``t`` lies on the root-to-``s`` path."""
    depth = _depths(arbo)
    bad = []
    for s, t in inst.precedences:
        if depth[t] >= depth[s] or t == arbo.root:
            continue
        v = s
        while depth[v] > depth[t]:
            v = arbo.parent[v]
        if v == t:
            bad.append((s, t))
    return bad


def tree_path(arbo: Arborescence, start: int, end: int) -> list[tuple[int, int]]:
    """Tree arcs on the path from ancestor ``start`` down to ``end``."""
    arcs = []
    v = end
    while v != start:
        p = arbo.parent[v]
        arcs.append((p, v))
        v = p
    arcs.reverse()
    return arcs


def entry_times(inst: Instance, arbo: Arborescence) -> TimedSolution:
    """Earliest entry times for a fixed PCMCA-feasible tree.

    Solves ``d[root] = 0``, ``d[j] >= d[parent] + c``, ``d[t] >= d[s]`` for
    every precedence, ``d >= 0`` by longest-path relaxation. The smallest
    such ``d`` also minimizes cost plus waiting time, because that sum
    telescopes to ``sum(d[j] - d[parent[j]])``.
    """
    bad = check_precedences(inst, arbo)
    if bad:
        raise ValueError(f"tree violates precedences {bad}")
    cons = [(i, j, inst.cost[i, j]) for j, i in arbo.parent.items()]
    cons += [(s, t, 0) for s, t in inst.precedences]
    d: dict[int, int | Fraction] = {v: 0 for v in range(inst.n)}
    changed_by: dict[int, int] = {}
    for _ in range(inst.n + 1):
        changed = None
        for u, v, c in cons:
            if d[u] + c > d[v]:
                d[v] = d[u] + c
                changed_by[v] = u
                changed = v
        if changed is None:
            break
    else:
        # still relaxing after n rounds: walk predecessors back into the cycle
        v = changed
        for _ in range(inst.n):
            v = changed_by[v]
        cyc = [v]
        u = changed_by[v]
        while u != v:
            cyc.append(u)
            u = changed_by[u]
        raise WaitInfeasibleError(tuple(reversed(cyc)))
    w = {j: d[j] - d[i] - inst.cost[i, j] for j, i in arbo.parent.items()}
    objective = arbo.cost + sum(w.values())
    return TimedSolution(arbo, d, w, objective)


def objective_pcmca(inst: Instance, arbo: Arborescence) -> int:
    total = sum(inst.cost[i, j] for j, i in arbo.parent.items())
    assert total == arbo.cost, "stored arborescence cost is stale"
    return total


def objective_pcmcawt(ts: TimedSolution):
    total = ts.arborescence.cost + sum(ts.w.values())
    assert total == ts.objective, "stored objective is stale"
    return total


def relative_gap(reference, bound) -> float:
    """Percentage gap ``100 * (reference - bound) / reference``.

    Negative when the bound exceeds the reference; callers that report it
    clamp as they see fit.
    """
    if reference <= 0:
        raise ValueError("relative gap needs a positive reference value")
    return 100.0 * (reference - bound) / reference
