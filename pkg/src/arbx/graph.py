"""Graph algorithms: minimum-cost arborescence, max-flow/min-cut, V_j sets.

The two kernels come from the compiled ``_ckernels`` extension when it
is importable and from ``_pykernels`` otherwise. Set ``ARBX_PURE_PYTHON=1``
to force the fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _pykernels
from .evaluation import Arborescence
from .instance import Instance

if os.environ.get("ARBX_PURE_PYTHON"):
    kernels = _pykernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:  # extension not built
        kernels = _pykernels

BACKEND = "cython" if kernels is not _pykernels else "python"
FLOW_EPS = 1e-9

__all__ = [
    "BACKEND",
    "DiGraph",
    "CutSet",
    "UnreachableError",
    "edmonds_mca",
    "min_cut",
    "allowed_predecessors",
    "reachable_from",
    "instance_graph",
    "use_backend",
]


def use_backend(name: str) -> None:
    """Switch kernels at runtime (``"python"`` or ``"cython"``)."""
    global kernels, BACKEND
    if name == "python":
        kernels = _pykernels
    elif name == "cython":
        from . import _ckernels

        kernels = _ckernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name


@dataclass(frozen=True)
class DiGraph:
    """Weighted digraph with stable arc indices.

    ``vertices`` restricts the active vertex set (arcs may only touch
    active vertices); it defaults to ``range(n)``.
    """

    n: int
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    weights: tuple[float, ...]
    vertices: frozenset[int] | None = None

    def __post_init__(self):
        if not len(self.tails) == len(self.heads) == len(self.weights):
            raise ValueError("arc arrays differ in length")
        active = self.active
        for a, (u, v, w) in enumerate(zip(self.tails, self.heads, self.weights)):
            if u == v:
                raise ValueError(f"self-loop at arc {a}")
            if w < 0:
                raise ValueError(f"negative weight on arc {a}")
            if u not in active or v not in active:
                raise ValueError(f"arc {a} touches an inactive vertex")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int, float]], vertices=None) -> "DiGraph":
        arcs = list(arcs)
        return cls(
            n,
            tuple(a[0] for a in arcs),
            tuple(a[1] for a in arcs),
            tuple(a[2] for a in arcs),
            None if vertices is None else frozenset(vertices),
        )

    @property
    def active(self) -> frozenset[int]:
        return frozenset(range(self.n)) if self.vertices is None else self.vertices

    @property
    def arcs(self) -> list[tuple[int, int, float]]:
        return list(zip(self.tails, self.heads, self.weights))

    def __len__(self):
        return len(self.tails)


@dataclass(frozen=True)
class CutSet:
    source_side: frozenset[int]
    arcs: tuple[tuple[int, int], ...]
    value: float
    flow_value: float = field(default=0.0, compare=False)


class UnreachableError(ValueError):
    def __init__(self, vertices: Sequence[int]):
        self.vertices = tuple(vertices)
        super().__init__(f"vertices unreachable from the root: {list(self.vertices)}")


def instance_graph(inst: Instance) -> DiGraph:
    return DiGraph.from_arcs(inst.n, inst.arcs)


def reachable_from(n: int, tails: Sequence[int], heads: Sequence[int], src: int) -> list[bool]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in zip(tails, heads):
        adj[u].append(v)
    seen = [False] * n
    seen[src] = True
    stack = [src]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return seen


def edmonds_mca(g: DiGraph, root: int) -> Arborescence:
    """Minimum-cost spanning arborescence of the active vertices.

    Raises :class:`UnreachableError` naming the vertices that cannot be
    reached from ``root``.
    """
    active = sorted(g.active)
    index = {v: k for k, v in enumerate(active)}
    tails = [index[u] for u in g.tails]
    heads = [index[v] for v in g.heads]
    parent_arc = kernels.edmonds(len(active), index[root], tails, heads, g.weights)
    if parent_arc is None:
        seen = reachable_from(len(active), tails, heads, index[root])
        raise UnreachableError([active[k] for k in range(len(active)) if not seen[k]])
    parent = {}
    cost = 0
    for k, a in enumerate(parent_arc):
        if a >= 0:
            parent[active[k]] = g.tails[a]
            cost += g.weights[a]
    return Arborescence(root, dict(sorted(parent.items())), cost)


def min_cut(g: DiGraph, s: int, t: int, eps: float = FLOW_EPS) -> CutSet:
    """Minimum ``(s, t)``-cut by blocking flow.

    The source side is the set of vertices reachable from ``s`` in the
    final residual graph. The flow value and the weight of the crossing
    arcs are both computed and checked against each other.
    """
    if s == t:
        raise ValueError("source and sink coincide")
    active = g.active
    if s not in active or t not in active:
        raise ValueError("source or sink is not an active vertex")
    value, reachable, _ = kernels.max_flow(g.n, g.tails, g.heads, g.weights, s, t, eps)
    side = frozenset(v for v in active if reachable[v])
    crossing = []
    cut_value = 0.0
    for u, v, w in zip(g.tails, g.heads, g.weights):
        if u in side and v not in side:
            crossing.append((u, v))
            cut_value += w
    tol = 1e-7 * max(1.0, abs(cut_value))
    assert abs(value - cut_value) <= tol, f"max-flow {value} != min-cut {cut_value}"
    return CutSet(side, tuple(crossing), cut_value, value)


def allowed_predecessors(inst: Instance, j: int) -> frozenset[int]:
    """``V_j``: every vertex except the immediate precedence successors of ``j``."""
    if j == inst.root:
        raise ValueError("V_j is undefined for the root")
    return frozenset(range(inst.n)) - inst.successors[j]
