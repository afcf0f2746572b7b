"""Problem instances: construction, normalization and text formats.

Two formats are supported:

* the SOP matrix format used by the TSPLIB/SOPLIB/COMPILERS benchmark
  sets (vertex 0 is the root, ``-1`` at ``(i, j)`` means ``j`` must
  precede ``i``);
* a sparse native format, one record per line::

      arbx 1
      name ESC07            # optional
      n 9 root 0
      a 0 1 12              # arc 0 -> 1 with cost 12
      p 3 1                 # precedence (3, 1): 1 must not be on the path to 3

Both readers return a normalized :class:`Instance`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, TextIO

__all__ = [
    "Instance",
    "InstanceError",
    "ParseError",
    "InfeasibleInstanceError",
    "normalize",
    "precedence_density",
    "parse_sop",
    "write_sop",
    "parse_native",
    "write_native",
    "read_instance",
    "load_instance",
]

SOP_SENTINEL = 1_000_000
_SENTINEL_RE = re.compile(r"arbx missing-arc sentinel (\d+)")


class InstanceError(ValueError):
    """An instance violates one of the structural invariants."""


class InfeasibleInstanceError(InstanceError):
    """A precedence targets the root, so no solution can exist."""


class ParseError(InstanceError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Instance:
    """Directed cost graph with a root and a set of precedence pairs.

    ``arcs`` holds ``(i, j, cost)`` triples and ``precedences`` holds
    ``(s, t)`` pairs, both sorted so that equal instances compare equal
    regardless of the order they were built in. Use :func:`normalize` to
    build one from raw data; the constructor only checks invariants.
    """

    n: int
    root: int
    arcs: tuple[tuple[int, int, int], ...]
    precedences: tuple[tuple[int, int], ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(sorted(tuple(a) for a in self.arcs)))
        object.__setattr__(
            self, "precedences", tuple(sorted(set(tuple(p) for p in self.precedences)))
        )
        _check_invariants(self)

    @cached_property
    def cost(self) -> dict[tuple[int, int], int]:
        return {(i, j): c for i, j, c in self.arcs}

    @cached_property
    def in_arcs(self) -> list[list[tuple[int, int]]]:
        """``in_arcs[j]`` lists ``(i, cost)`` for every arc entering ``j``."""
        res: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, j, c in self.arcs:
            res[j].append((i, c))
        return res

    @cached_property
    def out_arcs(self) -> list[list[tuple[int, int]]]:
        res: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, j, c in self.arcs:
            res[i].append((j, c))
        return res

    @cached_property
    def successors(self) -> list[frozenset[int]]:
        """Immediate successors of each vertex in the precedence graph."""
        res: list[set[int]] = [set() for _ in range(self.n)]
        for s, t in self.precedences:
            res[s].add(t)
        return [frozenset(x) for x in res]

    @cached_property
    def predecessors(self) -> list[frozenset[int]]:
        res: list[set[int]] = [set() for _ in range(self.n)]
        for s, t in self.precedences:
            res[t].add(s)
        return [frozenset(x) for x in res]

    @property
    def vertices(self) -> range:
        return range(self.n)

    def with_precedences(self, precedences: Iterable[tuple[int, int]]) -> "Instance":
        """Same graph with a different precedence set, re-normalized."""
        return normalize(self.n, self.root, self.arcs, precedences, self.name)


def _check_invariants(inst: Instance) -> None:
    n, root = inst.n, inst.root
    if n < 1:
        raise InstanceError("instance needs at least one vertex")
    if not 0 <= root < n:
        raise InstanceError(f"root {root} out of range")
    seen = set()
    for i, j, c in inst.arcs:
        if not (0 <= i < n and 0 <= j < n):
            raise InstanceError(f"arc ({i}, {j}) references an unknown vertex")
        if i == j:
            raise InstanceError(f"self-loop on vertex {i}")
        if j == root:
            raise InstanceError(f"arc ({i}, {j}) enters the root")
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise InstanceError(f"arc ({i}, {j}) has invalid cost {c!r}")
        if (i, j) in seen:
            raise InstanceError(f"duplicate arc ({i}, {j})")
        seen.add((i, j))
    for s, t in inst.precedences:
        if not (0 <= s < n and 0 <= t < n):
            raise InstanceError(f"precedence ({s}, {t}) references an unknown vertex")
        if s == t:
            raise InstanceError(f"self-precedence on vertex {s}")
        if t == root:
            raise InfeasibleInstanceError(f"precedence ({s}, {t}) targets the root")
        if (t, s) in seen:
            raise InstanceError(f"arc ({t}, {s}) contradicts precedence ({s}, {t})")


def normalize(
    n: int,
    root: int,
    arcs: Iterable[tuple[int, int, int]],
    precedences: Iterable[tuple[int, int]] = (),
    name: str = "",
) -> Instance:
    """Build an :class:`Instance`, dropping arcs that can never be used.

    Arcs entering the root are removed, as is the reverse arc ``(t, s)`` of
    every precedence ``(s, t)``. A precedence that targets the root makes
    the problem infeasible and raises :class:`InfeasibleInstanceError`.
    Anything else that is malformed (self-loops, duplicate arcs, negative
    or non-integer costs) raises :class:`InstanceError`.
    """
    prec = set()
    for s, t in precedences:
        s, t = int(s), int(t)
        if t == root:
            raise InfeasibleInstanceError(f"precedence ({s}, {t}) targets the root")
        prec.add((s, t))
    reverse = {(t, s) for s, t in prec}
    kept = []
    for i, j, c in arcs:
        if j == root or (i, j) in reverse:
            continue
        if isinstance(c, float) and c.is_integer():
            c = int(c)
        kept.append((int(i), int(j), c))
    return Instance(n=n, root=root, arcs=tuple(kept), precedences=tuple(prec), name=name)


def precedence_density(inst: Instance) -> float:
    """``2|R| / (n(n-1))``, the density of the precedence graph."""
    if inst.n < 2:
        raise ValueError("precedence density needs at least two vertices")
    return 2 * len(inst.precedences) / (inst.n * (inst.n - 1))


# --------------------------------------------------------------------------
# SOP matrix format


def _header_value(line: str) -> tuple[str, str]:
    if ":" in line:
        key, val = line.split(":", 1)
    else:
        parts = line.split(None, 1)
        key, val = parts[0], parts[1] if len(parts) > 1 else ""
    return key.strip().upper(), val.strip()


def parse_sop(text: str | TextIO, name: str | None = None) -> Instance:
    """Parse a SOP benchmark file.

    Diagonal entries and arcs into vertex 0 are ignored. If the file
    carries the ``arbx missing-arc sentinel K`` comment written by
    :func:`write_sop`, entries equal to ``K`` are read as absent arcs.
    """
    if not isinstance(text, str):
        text = text.read()
    lines = text.splitlines()
    header: dict[str, str] = {}
    sentinel = None
    body_start = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.upper().startswith("EDGE_WEIGHT_SECTION"):
            body_start = lineno
            break
        if line.upper() == "EOF":
            break
        key, val = _header_value(line)
        if not key or not re.fullmatch(r"[A-Z_]+", key):
            raise ParseError(f"malformed header line {line!r}", lineno)
        header[key] = val
        if key == "COMMENT":
            m = _SENTINEL_RE.search(val)
            if m:
                sentinel = int(m.group(1))
    if body_start is None:
        raise ParseError("missing EDGE_WEIGHT_SECTION")
    if "DIMENSION" not in header:
        raise ParseError("missing DIMENSION header")
    try:
        n = int(header["DIMENSION"])
    except ValueError:
        raise ParseError(f"bad DIMENSION {header['DIMENSION']!r}") from None
    if n < 1:
        raise ParseError(f"bad DIMENSION {n}")
    wtype = header.get("EDGE_WEIGHT_TYPE", "EXPLICIT").upper()
    wfmt = header.get("EDGE_WEIGHT_FORMAT", "FULL_MATRIX").upper()
    if wtype != "EXPLICIT" or wfmt != "FULL_MATRIX":
        raise ParseError(f"unsupported edge weights {wtype}/{wfmt}")

    rows: list[tuple[int, list[int]]] = []
    for lineno in range(body_start + 1, len(lines) + 1):
        line = lines[lineno - 1].strip()
        if not line:
            continue
        if line.upper() == "EOF" or line.upper().endswith("_SECTION"):
            break
        try:
            rows.append((lineno, [int(tok) for tok in line.split()]))
        except ValueError:
            raise ParseError(f"non-integer matrix entry in {line!r}", lineno) from None
    # SOP files repeat the dimension on the line after EDGE_WEIGHT_SECTION
    if rows and len(rows[0][1]) == 1 and rows[0][1][0] == n and n != 1:
        rows = rows[1:]
    tokens = [(ln, v) for ln, vals in rows for v in vals]
    if len(tokens) != n * n:
        ln = rows[-1][0] if rows else body_start
        raise ParseError(f"expected {n * n} matrix entries, found {len(tokens)}", ln)
    if rows and any(len(vals) != n for _, vals in rows) and len(rows) == n:
        bad = next(ln for ln, vals in rows if len(vals) != n)
        raise ParseError("matrix is not square", bad)

    arcs = []
    prec = []
    for k, (ln, v) in enumerate(tokens):
        i, j = divmod(k, n)
        if i == j:
            if v == -1:
                raise ParseError(f"-1 on the diagonal at vertex {i}", ln)
            continue
        if v == -1:
            prec.append((j, i))
        elif v < 0:
            raise ParseError(f"negative cost {v} at ({i}, {j})", ln)
        elif sentinel is not None and v == sentinel:
            continue
        else:
            arcs.append((i, j, v))
    if name is None:
        name = header.get("NAME", "")
        if name.lower().endswith(".sop"):
            name = name[:-4]
    return normalize(n, 0, arcs, prec, name)


def write_sop(inst: Instance) -> str:
    """Serialize to the SOP matrix format.

    Absent arcs that are not implied by a precedence are written with a
    sentinel cost, announced in a ``COMMENT`` line so :func:`parse_sop`
    can read them back as absent.
    """
    if inst.root != 0:
        raise ValueError("the SOP format requires the root to be vertex 0")
    n = inst.n
    sentinel = max([SOP_SENTINEL] + [c + 1 for _, _, c in inst.arcs])
    mat = [[sentinel] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = 0
        if i != inst.root:
            mat[i][inst.root] = 0
    for i, j, c in inst.arcs:
        mat[i][j] = c
    for s, t in inst.precedences:
        mat[t][s] = -1
    out = [
        f"NAME: {inst.name or 'unnamed'}.sop",
        "TYPE: SOP",
        f"COMMENT: arbx missing-arc sentinel {sentinel}",
        f"DIMENSION: {n}",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
        str(n),
    ]
    out.extend(" ".join(str(v) for v in row) for row in mat)
    out.append("EOF")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# native sparse format


def parse_native(text: str | TextIO) -> Instance:
    if not isinstance(text, str):
        text = text.read()
    n = root = None
    name = ""
    arcs = []
    prec = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if not seen_header:
            if tok != ["arbx", "1"]:
                raise ParseError("expected header 'arbx 1'", lineno)
            seen_header = True
            continue
        try:
            if tok[0] == "name" and len(tok) == 2:
                name = tok[1]
            elif tok[0] == "n" and len(tok) == 4 and tok[2] == "root":
                n, root = int(tok[1]), int(tok[3])
            elif tok[0] == "a" and len(tok) == 4:
                arcs.append((int(tok[1]), int(tok[2]), int(tok[3])))
            elif tok[0] == "p" and len(tok) == 3:
                prec.append((int(tok[1]), int(tok[2])))
            else:
                raise ParseError(f"unrecognized record {line!r}", lineno)
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", lineno) from None
    if not seen_header:
        raise ParseError("empty input")
    if n is None:
        raise ParseError("missing 'n <count> root <id>' line")
    pairs = [(i, j) for i, j, _ in arcs]
    if len(set(pairs)) != len(pairs):
        raise ParseError("duplicate arc record")
    return normalize(n, root, arcs, prec, name)


def write_native(inst: Instance) -> str:
    out = ["arbx 1"]
    if inst.name:
        out.append(f"name {inst.name}")
    out.append(f"n {inst.n} root {inst.root}")
    out.extend(f"a {i} {j} {c}" for i, j, c in inst.arcs)
    out.extend(f"p {s} {t}" for s, t in inst.precedences)
    return "\n".join(out) + "\n"


def read_instance(text: str, name: str | None = None) -> Instance:
    """Parse either format, sniffing the first non-comment line."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            if line.split() == ["arbx", "1"]:
                inst = parse_native(text)
                if name and not inst.name:
                    inst = Instance(inst.n, inst.root, inst.arcs, inst.precedences, name)
                return inst
            break
    return parse_sop(text, name=name)


def load_instance(path) -> Instance:
    from pathlib import Path

    p = Path(path)
    stem = p.name
    for suffix in (".sop", ".arbx", ".txt"):
        if stem.lower().endswith(suffix):
            stem = stem[: -len(suffix)]
    inst = read_instance(p.read_text())
    if not inst.name:
        inst = Instance(inst.n, inst.root, inst.arcs, inst.precedences, stem)
    return inst
