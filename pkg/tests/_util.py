"""Fixtures and oracles shared by the test modules."""
from __future__ import annotations

import itertools
import os
import random
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from arbx.instance import Instance, normalize
from arbx.models import cut_to_constraint, xname
from arbx.separation import FractionalSolution, find_violated_inequality

DATA = Path(__file__).parent / "data"
SOP_DIR = DATA / "sop"


def precedence_example(with_precedence: bool = True) -> Instance:
    # r=0; the precedence (3, 1) is also drawn as an arc
    arcs = [(0, 1, 1), (0, 2, 3), (0, 3, 2), (1, 2, 1), (2, 1, 3), (2, 3, 1), (3, 1, 3), (3, 2, 3)]
    return normalize(4, 0, arcs, [(3, 1)] if with_precedence else [], "precedence_example")


def waiting_example() -> Instance:
    arcs = [(0, 1, 1), (0, 2, 3), (0, 3, 1), (1, 2, 1), (1, 3, 4), (2, 1, 2), (2, 3, 3), (3, 1, 2)]
    return normalize(4, 0, arcs, [(2, 3)], "waiting_example")


# fractional separation examples: r=0, t=1, "1"=2, "2"=3, "3"=4, s=5 (s=4 in the second)
FLAT_CUT_X = {(0, 1): 1.0, (0, 3): 0.5, (0, 4): 1.0, (1, 2): 0.5, (1, 3): 0.5, (3, 2): 0.5, (2, 5): 0.5, (4, 5): 0.5}
VIOLATED_CUT_X = {(0, 1): 1.0, (0, 3): 0.5, (1, 2): 0.5, (1, 3): 0.5, (3, 2): 0.5, (3, 4): 0.5, (2, 4): 0.5}


def flat_cut_example() -> Instance:
    return normalize(6, 0, [(i, j, 1) for i, j in FLAT_CUT_X], [(5, 1)], "flat_cut_example")


def violated_cut_example() -> Instance:
    return normalize(5, 0, [(i, j, 1) for i, j in VIOLATED_CUT_X], [(4, 1)], "violated_cut_example")


def random_instance(
    rng: random.Random,
    n_max: int = 7,
    cost_max: int = 9,
    r_max: int = 6,
    arc_prob: float = 0.7,
    n_min: int = 2,
) -> Instance:
    n = rng.randint(n_min, n_max)
    arcs = [(i, j, rng.randint(0, cost_max)) for i in range(n) for j in range(1, n) if i != j and rng.random() < arc_prob]
    R: set[tuple[int, int]] = set()
    if n >= 3:
        for _ in range(rng.randint(0, r_max)):
            s, t = rng.sample(range(1, n), 2)
            if (t, s) not in R:
                R.add((s, t))
    return normalize(n, 0, arcs, R, f"rand{n}")


def enumerate_arborescences(inst: Instance):
    """Every valid parent map, by plain product over in-arcs plus a cycle walk."""
    others = [v for v in range(inst.n) if v != inst.root]
    for combo in itertools.product(*[[i for i, _ in inst.in_arcs[v]] for v in others]):
        parent = dict(zip(others, combo))
        ok = True
        for v in others:
            seen = set()
            while v != inst.root:
                if v in seen:
                    ok = False
                    break
                seen.add(v)
                v = parent[v]
            if not ok:
                break
        if ok:
            yield parent


def brute_mca_cost(inst: Instance):
    best = None
    for parent in enumerate_arborescences(inst):
        c = sum(inst.cost[p, v] for v, p in parent.items())
        best = c if best is None or c < best else best
    return best


def sop_file(name: str) -> Path | None:
    """Benchmark file from ``$ARBX_SOP_DIR`` or tests/data/sop, if present."""
    dirs = [Path(os.environ["ARBX_SOP_DIR"])] if os.environ.get("ARBX_SOP_DIR") else []
    dirs.append(SOP_DIR)
    for d in dirs:
        for cand in (name, name.lower(), name + ".sop", name.lower() + ".sop"):
            if (d / cand).is_file():
                return d / cand
    return None


def missing_sop_message(names) -> str:
    names = [names] if isinstance(names, str) else list(names)
    return (
        f"published SOP file(s) not found: {', '.join(names)}; place them in "
        f"{SOP_DIR} or point ARBX_SOP_DIR at a directory holding them"
    )


def fix_tree(m, inst, tree):
    return m.with_bounds({xname(i, j): (1, 1) if (i, j) in tree else (0, 0) for i, j, _ in inst.arcs})


# MILP oracle: SciPy's branch-and-bound on the full models with lazy cuts


def milp_optimum(inst, m):
    names = [v.name for v in m.variables]
    idx = {nm: k for k, nm in enumerate(names)}
    m = m.copy()
    for _ in range(200):
        c = np.zeros(len(names))
        for nm, a in m.objective.items():
            c[idx[nm]] = a
        A = np.zeros((len(m.constraints), len(names)))
        lo, hi = [], []
        for r, con in enumerate(m.constraints):
            for nm, a in con.terms:
                A[r, idx[nm]] = a
            lo.append(con.rhs if con.sense in (">=", "=") else -np.inf)
            hi.append(con.rhs if con.sense in ("<=", "=") else np.inf)
        integ = np.array([1 if v.kind == "binary" else 0 for v in m.variables])
        res = milp(c, constraints=LinearConstraint(A, lo, hi), integrality=integ,
                   bounds=Bounds([v.lb for v in m.variables], [v.ub for v in m.variables]))
        if res.status != 0:
            return None
        x = {(i, j): round(res.x[idx[xname(i, j)]]) for i, j, _ in inst.arcs}
        cut = find_violated_inequality(inst, FractionalSolution(x))
        if cut is None:
            return res.fun
        m.add_constraint(cut_to_constraint(cut, f"lazy_{len(m.constraints)}"))
    raise AssertionError("lazy-cut loop did not converge")
