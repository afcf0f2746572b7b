"""Pure-Python graph kernels.

Reference implementations of the two inner loops; ``_ckernels.pyx`` mirrors
them line for line. Both take flat arc arrays (``tails``, ``heads``,
``weights``) so callers can feed either backend the same data.
"""
from __future__ import annotations

from collections import deque

EPS = 1e-9


def max_flow(n, tails, heads, caps, s, t, eps=EPS):
    """Dinic blocking flow from ``s`` to ``t``.

    Returns ``(value, reachable, flow)`` where ``reachable[v]`` tells
    whether ``v`` is reachable from ``s`` in the final residual graph and
    ``flow[a]`` is the flow on arc ``a``.
    """
    m = len(tails)
    # residual edge 2a is arc a, 2a+1 its reverse
    to = [0] * (2 * m)
    res = [0.0] * (2 * m)
    adj = [[] for _ in range(n)]
    for a in range(m):
        u, v = tails[a], heads[a]
        to[2 * a] = v
        to[2 * a + 1] = u
        res[2 * a] = float(caps[a])
        adj[u].append(2 * a)
        adj[v].append(2 * a + 1)

    value = 0.0
    while True:
        level = [-1] * n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in adj[u]:
                v = to[e]
                if level[v] < 0 and res[e] > eps:
                    level[v] = level[u] + 1
                    q.append(v)
        if level[t] < 0:
            break
        it = [0] * n
        while True:
            pushed = _augment(adj, to, res, level, it, s, t, eps)
            if pushed <= eps:
                break
            value += pushed

    reachable = [False] * n
    reachable[s] = True
    q = deque([s])
    while q:
        u = q.popleft()
        for e in adj[u]:
            v = to[e]
            if not reachable[v] and res[e] > eps:
                reachable[v] = True
                q.append(v)
    flow = [res[2 * a + 1] for a in range(m)]
    return value, reachable, flow


def _augment(adj, to, res, level, it, s, t, eps):
    # iterative DFS for one augmenting path in the level graph
    path = []
    u = s
    while True:
        if u == t:
            f = min(res[e] for e in path)
            for e in path:
                res[e] -= f
                res[e ^ 1] += f
            return f
        advanced = False
        edges = adj[u]
        while it[u] < len(edges):
            e = edges[it[u]]
            v = to[e]
            if res[e] > eps and level[v] == level[u] + 1:
                path.append(e)
                u = v
                advanced = True
                break
            it[u] += 1
        if not advanced:
            if u == s:
                return 0.0
            level[u] = -1
            e = path.pop()
            u = to[e ^ 1]
            it[u] += 1


def edmonds(n, root, tails, heads, weights):
    """Chu-Liu/Edmonds minimum-cost arborescence.

    Returns a list ``parent_arc`` with the index of the arc entering each
    vertex (``-1`` for the root), or ``None`` when some vertex is not
    reachable from the root. Among equal-cost entering arcs the one with
    the smallest original tail wins, then the smallest arc index.
    """
    m = len(tails)
    # current-level arcs: (u, v, w, id of the arc one level up)
    cu = list(tails)
    cv = list(heads)
    cw = [float(w) for w in weights]
    up = list(range(m))
    orig = list(range(m))
    nn = n
    r = root
    levels = []
    while True:
        best = [-1] * nn
        for a in range(len(cu)):
            v = cv[a]
            if v == r or cu[a] == v:
                continue
            b = best[v]
            if b < 0:
                best[v] = a
                continue
            if cw[a] < cw[b] or (
                cw[a] == cw[b]
                and (tails[orig[a]], orig[a]) < (tails[orig[b]], orig[b])
            ):
                best[v] = a
        for v in range(nn):
            if v != r and best[v] < 0:
                return None
        # find cycles of the chosen in-arcs
        comp = [-1] * nn
        mark = [-1] * nn
        ncomp = 0
        cycles = []
        for v0 in range(nn):
            v = v0
            while v != r and mark[v] < 0 and comp[v] < 0:
                mark[v] = v0
                v = cu[best[v]]
            if v != r and mark[v] == v0 and comp[v] < 0:
                cyc = []
                x = v
                while True:
                    comp[x] = ncomp
                    cyc.append(x)
                    x = cu[best[x]]
                    if x == v:
                        break
                cycles.append(cyc)
                ncomp += 1
        if not cycles:
            break
        for v in range(nn):
            if comp[v] < 0:
                comp[v] = ncomp
                ncomp += 1
        in_cycle = [False] * nn
        for cyc in cycles:
            for x in cyc:
                in_cycle[x] = True
        nu, nv, nw, nup, norig = [], [], [], [], []
        for a in range(len(cu)):
            u, v = cu[a], cv[a]
            if comp[u] == comp[v]:
                continue
            w = cw[a]
            if in_cycle[v]:
                w -= cw[best[v]]
            nu.append(comp[u])
            nv.append(comp[v])
            nw.append(w)
            nup.append(a)
            norig.append(orig[a])
        levels.append((best, cycles, comp, cv, up))
        cu, cv, cw, up, orig = nu, nv, nw, nup, norig
        nn = ncomp
        r = comp[r]

    chosen = [best[v] for v in range(nn) if v != r]
    # expand contracted cycles, innermost level last
    for best_l, cycles, comp, cv_l, up_l in reversed(levels):
        chosen = [up[a] for a in chosen]
        entered = set()
        for a in chosen:
            entered.add(cv_l[a])
        for cyc in cycles:
            for x in cyc:
                if x not in entered:
                    chosen.append(best_l[x])
        up = up_l
    parent_arc = [-1] * n
    for a in chosen:
        parent_arc[heads[a]] = a
    return parent_arc
