# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; same contract as ``arbx._pykernels``."""

from libc.stdlib cimport malloc, free


cdef inline double _dmin(double a, double b):
    return a if a < b else b


def max_flow(int n, tails, heads, caps, int s, int t, double eps=1e-9):
    cdef int m = len(tails)
    cdef int i, a, u, v, e, qh, qt, top, f_idx
    cdef double value = 0.0, f
    cdef int *to = <int *> malloc(2 * m * sizeof(int))
    cdef double *res = <double *> malloc(2 * m * sizeof(double))
    cdef int *deg = <int *> malloc((n + 1) * sizeof(int))
    cdef int *adj = <int *> malloc(2 * m * sizeof(int))
    cdef int *fill = <int *> malloc(n * sizeof(int))
    cdef int *level = <int *> malloc(n * sizeof(int))
    cdef int *it = <int *> malloc(n * sizeof(int))
    cdef int *queue = <int *> malloc(n * sizeof(int))
    cdef int *path = <int *> malloc((n + 1) * sizeof(int))
    try:
        for i in range(n + 1):
            deg[i] = 0
        for a in range(m):
            u = tails[a]
            v = heads[a]
            to[2 * a] = v
            to[2 * a + 1] = u
            res[2 * a] = caps[a]
            res[2 * a + 1] = 0.0
            deg[u + 1] += 1
            deg[v + 1] += 1
        # CSR layout: adj[deg[u]:deg[u+1]] lists residual edges out of u
        for i in range(n):
            deg[i + 1] += deg[i]
            fill[i] = deg[i]
        for a in range(m):
            u = tails[a]
            v = heads[a]
            adj[fill[u]] = 2 * a
            fill[u] += 1
            adj[fill[v]] = 2 * a + 1
            fill[v] += 1

        while True:
            for i in range(n):
                level[i] = -1
            level[s] = 0
            qh = 0
            qt = 0
            queue[qt] = s
            qt += 1
            while qh < qt:
                u = queue[qh]
                qh += 1
                for i in range(deg[u], deg[u + 1]):
                    e = adj[i]
                    v = to[e]
                    if level[v] < 0 and res[e] > eps:
                        level[v] = level[u] + 1
                        queue[qt] = v
                        qt += 1
            if level[t] < 0:
                break
            for i in range(n):
                it[i] = deg[i]
            while True:
                # one augmenting path by iterative DFS
                top = 0
                u = s
                f = 0.0
                while True:
                    if u == t:
                        f = res[path[0]]
                        for i in range(1, top):
                            f = _dmin(f, res[path[i]])
                        for i in range(top):
                            res[path[i]] -= f
                            res[path[i] ^ 1] += f
                        break
                    while it[u] < deg[u + 1]:
                        e = adj[it[u]]
                        v = to[e]
                        if res[e] > eps and level[v] == level[u] + 1:
                            break
                        it[u] += 1
                    if it[u] < deg[u + 1]:
                        path[top] = adj[it[u]]
                        top += 1
                        u = to[adj[it[u]]]
                    else:
                        if u == s:
                            break
                        level[u] = -1
                        top -= 1
                        u = to[path[top] ^ 1]
                        it[u] += 1
                if f <= eps:
                    break
                value += f

        reachable = [False] * n
        for i in range(n):
            level[i] = 0
        level[s] = 1
        qh = 0
        qt = 0
        queue[qt] = s
        qt += 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            for i in range(deg[u], deg[u + 1]):
                e = adj[i]
                v = to[e]
                if level[v] == 0 and res[e] > eps:
                    level[v] = 1
                    queue[qt] = v
                    qt += 1
        for i in range(n):
            reachable[i] = level[i] == 1
        flow = [res[2 * a + 1] for a in range(m)]
        return value, reachable, flow
    finally:
        free(to)
        free(res)
        free(deg)
        free(adj)
        free(fill)
        free(level)
        free(it)
        free(queue)
        free(path)


def edmonds(int n, int root, tails, heads, weights):
    cdef int m = len(tails)
    cdef int nn = n, r = root, a, b, v, v0, x, ncomp, k, cur_m, nm
    cdef int *otail = <int *> malloc(m * sizeof(int))
    cdef int *cu = <int *> malloc(m * sizeof(int))
    cdef int *cv = <int *> malloc(m * sizeof(int))
    cdef double *cw = <double *> malloc(m * sizeof(double))
    cdef int *orig = <int *> malloc(m * sizeof(int))
    cdef int *best = <int *> malloc(n * sizeof(int))
    cdef int *comp = <int *> malloc(n * sizeof(int))
    cdef int *mark = <int *> malloc(n * sizeof(int))
    cdef char *incyc = <char *> malloc(n * sizeof(char))
    cdef double *inw = <double *> malloc(n * sizeof(double))
    cdef double w
    try:
        for a in range(m):
            otail[a] = tails[a]
            cu[a] = tails[a]
            cv[a] = heads[a]
            cw[a] = weights[a]
            orig[a] = a
        cur_m = m
        up = list(range(m))
        levels = []
        while True:
            for v in range(nn):
                best[v] = -1
            for a in range(cur_m):
                v = cv[a]
                if v == r or cu[a] == v:
                    continue
                b = best[v]
                if b < 0:
                    best[v] = a
                elif cw[a] < cw[b] or (cw[a] == cw[b] and (
                        otail[orig[a]] < otail[orig[b]]
                        or (otail[orig[a]] == otail[orig[b]] and orig[a] < orig[b]))):
                    best[v] = a
            for v in range(nn):
                if v != r and best[v] < 0:
                    return None
            for v in range(nn):
                comp[v] = -1
                mark[v] = -1
                incyc[v] = 0
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
                        incyc[x] = 1
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
            for v in range(nn):
                if incyc[v]:
                    inw[v] = cw[best[v]]
            best_l = [best[v] for v in range(nn)]
            cv_l = [cv[a] for a in range(cur_m)]
            nup = []
            nm = 0
            for a in range(cur_m):
                if comp[cu[a]] == comp[cv[a]]:
                    continue
                # compaction in place is safe because nm <= a
                w = cw[a]
                if incyc[cv[a]]:
                    w -= inw[cv[a]]
                x = cv[a]
                cu[nm] = comp[cu[a]]
                cv[nm] = comp[x]
                cw[nm] = w
                orig[nm] = orig[a]
                nup.append(a)
                nm += 1
            levels.append((best_l, cycles, cv_l, up))
            up = nup
            cur_m = nm
            r = comp[r]
            nn = ncomp

        chosen = [best[v] for v in range(nn) if v != r]
        for best_l, cycles, cv_l, up_l in reversed(levels):
            chosen = [up[a] for a in chosen]
            entered = set(cv_l[a] for a in chosen)
            for cyc in cycles:
                for x in cyc:
                    if x not in entered:
                        chosen.append(best_l[x])
            up = up_l
        parent_arc = [-1] * n
        for a in chosen:
            parent_arc[heads[a]] = a
        return parent_arc
    finally:
        free(otail)
        free(cu)
        free(cv)
        free(cw)
        free(orig)
        free(best)
        free(comp)
        free(mark)
        free(incyc)
        free(inw)
