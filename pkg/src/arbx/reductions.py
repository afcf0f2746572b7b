"""Instance generators for the two hardness reductions, and the RSA oracle.

``from_3sat`` turns a 3-CNF formula into a PCMCA instance that is
feasible exactly when the formula is satisfiable. ``from_rsa`` turns a
rectilinear Steiner arborescence point set into a PCMCA-WT instance whose
optimum equals the shortest arborescence length.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, TextIO

from .evaluation import Arborescence
from .instance import Instance, ParseError, normalize

__all__ = [
    "CnfFormula",
    "read_dimacs",
    "from_3sat",
    "literal_vertex",
    "satisfiability_from_solution",
    "RsaPointSet",
    "read_points",
    "hanan_grid",
    "from_rsa",
    "rsa_brute_force",
]

ROOT, S, S_PRIME, T = 0, 1, 2, 3


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if not self.clauses:
            raise ValueError("formula needs at least one clause")
        for c in self.clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(assignment.get(abs(l), False) == (l > 0) for l in c) for c in self.clauses)

    def is_satisfiable(self) -> bool:
        for bits in itertools.product((False, True), repeat=self.num_vars):
            if self.evaluate(dict(enumerate(bits, start=1))):
                return True
        return False


def read_dimacs(text: str | TextIO) -> CnfFormula:
    """DIMACS CNF reader; every clause must have exactly three literals."""
    if not isinstance(text, str):
        text = text.read()
    num_vars = None
    n_clauses = None
    clauses = []
    cur: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line {line!r}", lineno)
            num_vars, n_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ParseError("clause before the problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if len(cur) != 3:
                    raise ParseError(f"clause with {len(cur)} literals, expected 3", lineno)
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if cur:
        raise ParseError("last clause is not terminated by 0")
    if num_vars is None:
        raise ParseError("missing problem line")
    if n_clauses != len(clauses):
        raise ParseError(f"header announces {n_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def literal_vertex(i: int, k: int) -> int:
    """Vertex of literal ``k`` (0-based) in clause ``i`` (0-based)."""
    return 4 + 3 * i + k


def _opposite(a: int, b: int) -> bool:
    return a == -b


def from_3sat(f: CnfFormula, symmetric: bool = False, name: str = "") -> Instance:
    """Reduced PCMCA instance; all arcs cost 1.

    Vertices: root 0, ``s`` 1, ``s'`` 2, ``t`` 3, then three literal
    vertices per clause. A literal in a later clause must not sit above
    its opposite in an earlier clause. With ``symmetric`` the pair is
    constrained in both directions.
    """
    m = len(f.clauses)
    n = 4 + 3 * m
    R = {(T, S_PRIME)}
    for h in range(m):
        for i in range(h):
            for k in range(3):
                for j in range(3):
                    if _opposite(f.clauses[h][k], f.clauses[i][j]):
                        R.add((literal_vertex(h, k), literal_vertex(i, j)))
                        if symmetric:
                            R.add((literal_vertex(i, j), literal_vertex(h, k)))
    arcs = [(ROOT, S, 1), (ROOT, S_PRIME, 1)]
    arcs += [(S, literal_vertex(0, j), 1) for j in range(3)]
    arcs += [(literal_vertex(m - 1, j), T, 1) for j in range(3)]
    for i in range(m - 1):
        for j in range(3):
            for k in range(3):
                a, b = literal_vertex(i, j), literal_vertex(i + 1, k)
                # an arc whose reverse pair is a precedence would be dropped anyway
                if (b, a) not in R:
                    arcs.append((a, b, 1))
    arcs += [(S_PRIME, literal_vertex(i, j), 1) for i in range(m) for j in range(3)]
    return normalize(n, ROOT, arcs, R, name or f"3sat-{f.num_vars}v{m}c")


def satisfiability_from_solution(f: CnfFormula, arbo: Arborescence) -> dict[int, bool] | None:
    """Read a satisfying assignment off the root-to-``t`` path.

    Returns ``None`` when the path does not run ``r, s, one literal per
    clause, t``, which only happens for trees that are not feasible for
    the reduced instance.
    """
    path = arbo.path_to(T)
    m = len(f.clauses)
    if len(path) != m + 3 or path[1] != S:
        return None
    assignment: dict[int, bool] = {}
    for i, v in enumerate(path[2:-1]):
        k = v - literal_vertex(i, 0)
        if not 0 <= k < 3:
            return None
        lit = f.clauses[i][k]
        if assignment.get(abs(lit), lit > 0) != (lit > 0):
            return None
        assignment[abs(lit)] = lit > 0
    for x in range(1, f.num_vars + 1):
        assignment.setdefault(x, False)
    assert f.evaluate(assignment), "path literals do not satisfy the formula"
    return assignment


@dataclass(frozen=True)
class RsaPointSet:
    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = tuple((int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if not pts or pts[0] != (0, 0):
            raise ValueError("the first point must be the origin")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        if any(x < 0 or y < 0 for x, y in pts):
            raise ValueError("coordinates must be non-negative")

    @property
    def far(self) -> int:
        """Index of the point maximizing ``x + y``; lowest index on ties."""
        return max(range(len(self.points)), key=lambda k: (sum(self.points[k]), -k))


def read_points(text: str | TextIO) -> RsaPointSet:
    if not isinstance(text, str):
        text = text.read()
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'x y', got {line!r}", lineno)
        try:
            pts.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"non-integer coordinate in {line!r}", lineno) from None
    return RsaPointSet(tuple(pts))


def hanan_grid(pts: RsaPointSet) -> tuple[list[tuple[int, int]], list[tuple[int, int, int]]]:
    """Grid vertices (input points first, then Steiner points by ``(x, y)``)
    and the right/up grid arcs with Manhattan costs."""
    xs = sorted({x for x, _ in pts.points})
    ys = sorted({y for _, y in pts.points})
    given = set(pts.points)
    steiner = sorted((x, y) for x in xs for y in ys if (x, y) not in given)
    coords = list(pts.points) + steiner
    index = {p: k for k, p in enumerate(coords)}
    arcs = []
    for a, x in enumerate(xs):
        for b, y in enumerate(ys):
            u = index[x, y]
            if a + 1 < len(xs):
                arcs.append((u, index[xs[a + 1], y], xs[a + 1] - x))
            if b + 1 < len(ys):
                arcs.append((u, index[x, ys[b + 1]], ys[b + 1] - y))
    return coords, arcs


def from_rsa(pts: RsaPointSet, name: str = "") -> Instance:
    """PCMCA-WT instance of an RSA point set; root is the origin (vertex 0)."""
    coords, grid = hanan_grid(pts)
    p = len(pts.points)
    far = pts.far
    arcs = {(i, j): c for i, j, c in grid}
    for s in range(p, len(coords)):
        arcs[far, s] = 0
    R = [(k, far) for k in range(p) if k != far]
    return normalize(len(coords), 0, [(i, j, c) for (i, j), c in arcs.items()], R, name or f"rsa-{p}")


def rsa_brute_force(pts: RsaPointSet, cap: int = 16) -> int:
    """Shortest rectilinear Steiner arborescence length by enumeration.

    For a fixed vertex subset of the grid DAG the best spanning
    arborescence gives every vertex its cheapest in-arc from the subset,
    so the search only ranges over Steiner subsets.
    """
    coords, grid = hanan_grid(pts)
    p = len(pts.points)
    n_steiner = len(coords) - p
    if n_steiner > cap:
        raise ValueError(f"{n_steiner} Steiner points exceed the cap {cap}")
    into: dict[int, list[tuple[int, int]]] = {v: [] for v in range(len(coords))}
    for i, j, c in grid:
        into[j].append((i, c))
    best = None
    for mask in range(1 << n_steiner):
        chosen = set(range(p)) | {p + k for k in range(n_steiner) if mask >> k & 1}
        total = 0
        parent = {}
        for v in chosen:
            if v == 0:
                continue
            opts = [(c, i) for i, c in into[v] if i in chosen]
            if not opts:
                break
            c, i = min(opts)
            parent[v] = i
            total += c
        else:
            for k in range(1, p):
                length, v = 0, k
                while v != 0:
                    length += abs(coords[v][0] - coords[parent[v]][0]) + abs(coords[v][1] - coords[parent[v]][1])
                    v = parent[v]
                assert length == sum(coords[k]), "grid path is not monotone"
            if best is None or total < best:
                best = total
    assert best is not None
    return best


def _all_formulas(max_vars: int, max_clauses: int) -> Iterable[CnfFormula]:
    """Every 3-CNF over ``1..t`` variables with ``1..m`` clauses, up to
    clause order and literal order within a clause."""
    for t in range(1, max_vars + 1):
        lits = [v for x in range(1, t + 1) for v in (x, -x)]
        clause_set = list(itertools.combinations_with_replacement(lits, 3))
        for m in range(1, max_clauses + 1):
            for clauses in itertools.combinations_with_replacement(clause_set, m):
                yield CnfFormula(t, clauses)
