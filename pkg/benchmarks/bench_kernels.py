"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --sizes 20 50 100 --repeat 5

Both backends run on the same random graphs and must return the same
arborescence cost and cut value; the script exits non-zero otherwise.
"""
import argparse
import random
import sys
import time

from arbx import graph
from arbx.graph import DiGraph, edmonds_mca, min_cut


def random_graph(rng, n, density):
    arcs = [(i, j, rng.randint(1, 100)) for i in range(n) for j in range(n) if i != j and rng.random() < density]
    # a spanning chain keeps every vertex reachable from the root
    have = {(i, j) for i, j, _ in arcs}
    arcs += [(v, v + 1, 100) for v in range(n - 1) if (v, v + 1) not in have]
    return DiGraph.from_arcs(n, arcs)


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 50, 100, 200])
    ap.add_argument("--density", type=float, default=0.5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        graph.use_backend("cython")
    except ImportError:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation` with Cython available")
        return 1

    rng = random.Random(args.seed)
    print(f"{'n':>5} {'arcs':>7} {'kernel':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        g = random_graph(rng, n, args.density)
        jobs = [("edmonds", lambda: edmonds_mca(g, 0).cost), ("maxflow", lambda: min_cut(g, 0, n - 1).value)]
        for label, job in jobs:
            res = {}
            for backend in ("python", "cython"):
                graph.use_backend(backend)
                res[backend] = timed(job, args.repeat)
            (py_val, py_t), (c_val, c_t) = res["python"], res["cython"]
            if abs(py_val - c_val) > 1e-9:
                print(f"backends disagree on {label} at n={n}: {py_val} vs {c_val}")
                return 1
            print(f"{n:>5} {len(g):>7} {label:>8} {py_t:>10.4f} {c_t:>10.4f} {py_t / c_t:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
