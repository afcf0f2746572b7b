"""Adapter running a :class:`LinearModel` relaxation through SciPy's HiGHS.

Used as the independent oracle for the in-house simplex and, on request,
as the node-bound LP solver.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from .linear import LinearModel
from .simplex import LpSolution

_STATUS = {0: "optimal", 1: "iteration-limit", 2: "infeasible", 3: "unbounded"}


def solve_lp_highs(model: LinearModel) -> LpSolution:
    names = [v.name for v in model.variables]
    index = {n: k for k, n in enumerate(names)}
    n = len(names)
    c = np.zeros(n)
    for name, a in model.objective.items():
        c[index[name]] = a
    ub_r, ub_c, ub_v, ub_b = [], [], [], []
    eq_r, eq_c, eq_v, eq_b = [], [], [], []
    for con in model.constraints:
        if con.sense == "=":
            r = len(eq_b)
            for name, a in con.terms:
                eq_r.append(r)
                eq_c.append(index[name])
                eq_v.append(a)
            eq_b.append(con.rhs)
        else:
            sign = 1.0 if con.sense == "<=" else -1.0
            r = len(ub_b)
            for name, a in con.terms:
                ub_r.append(r)
                ub_c.append(index[name])
                ub_v.append(sign * a)
            ub_b.append(sign * con.rhs)
    A_ub = coo_matrix((ub_v, (ub_r, ub_c)), shape=(len(ub_b), n)).tocsr() if ub_b else None
    A_eq = coo_matrix((eq_v, (eq_r, eq_c)), shape=(len(eq_b), n)).tocsr() if eq_b else None
    bounds = [(None if v.lb == -math.inf else v.lb, None if v.ub == math.inf else v.ub) for v in model.variables]
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=np.array(ub_b) if ub_b else None,
        A_eq=A_eq,
        b_eq=np.array(eq_b) if eq_b else None,
        bounds=bounds,
        method="highs",
    )
    status = _STATUS.get(res.status, "infeasible")
    if status != "optimal":
        return LpSolution(status, iterations=int(getattr(res, "nit", 0) or 0))
    values = {name: float(res.x[k]) for k, name in enumerate(names)}
    return LpSolution("optimal", float(res.fun), values, int(res.nit))
