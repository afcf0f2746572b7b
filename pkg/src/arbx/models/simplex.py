"""Dense two-phase primal simplex for the linear relaxations.

The tableau is a NumPy array. Pricing follows Dantzig's rule until a run
of degenerate pivots is seen, then switches to Bland's rule, which cannot
cycle; ``pricing="bland"`` uses Bland's rule throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linear import LinearModel

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7

__all__ = ["LpSolution", "solve_lp", "PIVOT_TOL"]


@dataclass
class LpSolution:
    status: str  # optimal, infeasible, unbounded, iteration-limit
    objective: float = math.nan
    values: dict[str, float] = field(default_factory=dict)
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int], pricing: str, max_iter: int):
        self.T = T
        self.basis = basis
        self.pricing = pricing
        self.max_iter = max_iter
        self.iterations = 0

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        T[r] /= T[r, c]
        col = T[:, c].copy()
        col[r] = 0.0
        nz = np.flatnonzero(np.abs(col) > 0)
        if nz.size:
            T[nz] -= np.outer(col[nz], T[r])
        T[:, c] = 0.0
        T[r, c] = 1.0
        self.basis[r] = c

    def run(self, allowed: np.ndarray) -> str:
        """Minimize the objective in the last row over the ``allowed`` columns."""
        T = self.T
        m = T.shape[0] - 1
        degenerate = 0
        bland = self.pricing == "bland"
        while True:
            if self.iterations >= self.max_iter:
                return "iteration-limit"
            rc = T[m, :-1]
            cand = np.flatnonzero((rc < -PIVOT_TOL) & allowed)
            if cand.size == 0:
                return "optimal"
            c = int(cand[0]) if bland else int(cand[np.argmin(rc[cand])])
            colv = T[:m, c]
            rows = np.flatnonzero(colv > PIVOT_TOL)
            if rows.size == 0:
                return "unbounded"
            ratios = T[rows, -1] / colv[rows]
            best = ratios.min()
            ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
            # Bland's leaving rule: smallest basic column index among ties
            r = int(min(ties, key=lambda i: self.basis[i]))
            if best <= PIVOT_TOL:
                degenerate += 1
                if degenerate > 50:
                    bland = True
            else:
                degenerate = 0
                bland = self.pricing == "bland"
            self.pivot(r, c)
            self.iterations += 1


def _standard_form(model: LinearModel):
    """Shift/split columns so every structural variable is ``>= 0``.

    Returns ``(A, senses, b, c, recover)``; ``recover`` maps the standard
    vector back to model values.
    """
    names = [v.name for v in model.variables]
    index = {n: k for k, n in enumerate(names)}
    cols: list[tuple[int, float, float]] = []  # (var, scale, offset)
    var_cols: list[list[int]] = []
    extra_rows = []
    for k, v in enumerate(model.variables):
        lo, hi = v.lb, v.ub
        if lo > -math.inf:
            var_cols.append([len(cols)])
            cols.append((k, 1.0, lo))
            if hi < math.inf:
                extra_rows.append((len(cols) - 1, hi - lo))
        elif hi < math.inf:
            var_cols.append([len(cols)])
            cols.append((k, -1.0, hi))
        else:
            var_cols.append([len(cols), len(cols) + 1])
            cols.append((k, 1.0, 0.0))
            cols.append((k, -1.0, 0.0))
    ncol = len(cols)
    nrow = len(model.constraints) + len(extra_rows)
    A = np.zeros((nrow, ncol))
    b = np.zeros(nrow)
    senses = []
    for r, con in enumerate(model.constraints):
        rhs = con.rhs
        for name, a in con.terms:
            k = index[name]
            for j in var_cols[k]:
                _, scale, off = cols[j]
                A[r, j] += a * scale
            # the offset is shared by every column of the variable
            rhs -= a * cols[var_cols[k][0]][2]
        b[r] = rhs
        senses.append(con.sense)
    for e, (j, ub) in enumerate(extra_rows):
        r = len(model.constraints) + e
        A[r, j] = 1.0
        b[r] = ub
        senses.append("<=")
    c = np.zeros(ncol)
    const = 0.0
    for name, a in model.objective.items():
        k = index[name]
        for j in var_cols[k]:
            c[j] += a * cols[j][1]
        const += a * cols[var_cols[k][0]][2]

    def recover(xs: np.ndarray) -> dict[str, float]:
        out = {}
        for k, name in enumerate(names):
            val = 0.0
            for j in var_cols[k]:
                _, scale, off = cols[j]
                val += scale * xs[j]
            out[name] = val + cols[var_cols[k][0]][2]
        return out

    return A, senses, b, c, const, recover


def solve_lp(model: LinearModel, *, pricing: str = "dantzig", max_iter: int = 200_000) -> LpSolution:
    """Solve the continuous relaxation of ``model`` (binaries become ``[0, 1]``)."""
    if pricing not in ("dantzig", "bland"):
        raise ValueError(f"unknown pricing rule {pricing!r}")
    A, senses, b, c, const, recover = _standard_form(model)
    m, n = A.shape
    # flip rows so b >= 0
    for r in range(m):
        if b[r] < 0:
            A[r] *= -1
            b[r] *= -1
            senses[r] = {"<=": ">=", ">=": "<=", "=": "="}[senses[r]]
    n_slack = sum(1 for s in senses if s != "=")
    n_art = sum(1 for s in senses if s != "<=")
    N = n + n_slack + n_art
    T = np.zeros((m + 1, N + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    basis = [-1] * m
    sj = n
    aj = n + n_slack
    art_cols = []
    for r, s in enumerate(senses):
        if s == "<=":
            T[r, sj] = 1.0
            basis[r] = sj
            sj += 1
        elif s == ">=":
            T[r, sj] = -1.0
            sj += 1
        if s != "<=":
            T[r, aj] = 1.0
            basis[r] = aj
            art_cols.append(aj)
            aj += 1

    tab = _Tableau(T, basis, pricing, max_iter)
    allowed = np.ones(N, dtype=bool)
    if art_cols:
        # phase one: minimize the sum of artificials
        T[m, :] = 0.0
        for r, s in enumerate(senses):
            if s != "<=":
                T[m, :] -= T[r, :]
        for j in art_cols:
            T[m, j] = 0.0
        status = tab.run(allowed)
        if status == "iteration-limit":
            return LpSolution(status, iterations=tab.iterations)
        infeas = -T[m, -1]
        if infeas > FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
            return LpSolution("infeasible", iterations=tab.iterations)
        is_art = np.zeros(N, dtype=bool)
        is_art[art_cols] = True
        # drive artificials out of the basis; drop redundant rows
        keep = []
        for r in range(m):
            if is_art[tab.basis[r]]:
                row = T[r, :N]
                cand = np.flatnonzero((np.abs(row) > PIVOT_TOL) & ~is_art)
                if cand.size:
                    tab.pivot(r, int(cand[0]))
                    keep.append(r)
            else:
                keep.append(r)
        if len(keep) < m:
            T = np.vstack([T[keep], T[m : m + 1]])
            tab.T = T
            tab.basis = [tab.basis[r] for r in keep]
            m = len(keep)
        allowed = ~is_art
        T[:m, art_cols] = 0.0

    # phase two
    T[m, :] = 0.0
    T[m, :n] = c
    for r in range(m):
        j = tab.basis[r]
        if T[m, j] != 0.0:
            T[m, :] -= T[m, j] * T[r, :]
    status = tab.run(allowed)
    if status != "optimal":
        return LpSolution(status, iterations=tab.iterations)
    xs = np.zeros(N)
    for r in range(m):
        xs[tab.basis[r]] = T[r, -1]
    values = recover(xs[:n])
    return LpSolution("optimal", float(c @ xs[:n] + const), values, tab.iterations)
