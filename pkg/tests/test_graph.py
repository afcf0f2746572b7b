import itertools
import random

import pytest

from arbx import graph
from arbx.evaluation import validate_arborescence
from arbx.graph import DiGraph, UnreachableError, allowed_predecessors, edmonds_mca, instance_graph, min_cut
from arbx.instance import normalize

from _util import brute_mca_cost, enumerate_arborescences, precedence_example, random_instance


def _backends():
    names = ["python"]
    try:
        from arbx import _ckernels  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    return names


@pytest.fixture(params=_backends())
def backend(request):
    previous = graph.BACKEND
    graph.use_backend(request.param)
    yield request.param
    graph.use_backend(previous)


def test_precedence_example_mca(backend):
    inst = precedence_example()
    arbo = edmonds_mca(instance_graph(inst), 0)
    assert arbo.cost == 3
    assert dict(arbo.parent) == {1: 0, 2: 1, 3: 2}


def test_star(backend):
    g = DiGraph.from_arcs(4, [(0, 1, 2), (0, 2, 5), (0, 3, 1)])
    arbo = edmonds_mca(g, 0)
    assert arbo.cost == 8 and dict(arbo.parent) == {1: 0, 2: 0, 3: 0}


def test_unreachable(backend):
    g = DiGraph.from_arcs(4, [(0, 1, 1), (2, 3, 1), (3, 2, 1)])
    with pytest.raises(UnreachableError) as exc:
        edmonds_mca(g, 0)
    assert set(exc.value.vertices) == {2, 3}


def test_tie_break_smallest_tail(backend):
    g = DiGraph.from_arcs(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
    assert dict(edmonds_mca(g, 0).parent) == {1: 0, 2: 0}


def test_edmonds_matches_enumeration(backend):
    rng = random.Random(7)
    checked = 0
    while checked < 50:
        inst = random_instance(rng, n_max=7, r_max=0)
        best = brute_mca_cost(inst)
        if best is None:
            with pytest.raises(UnreachableError):
                edmonds_mca(instance_graph(inst), 0)
            continue
        arbo = edmonds_mca(instance_graph(inst), 0)
        assert arbo.cost == best
        assert validate_arborescence(inst, arbo.parent) == []
        checked += 1


def test_edmonds_beats_random_samples(backend):
    rng = random.Random(8)
    for _ in range(20):
        inst = random_instance(rng, n_max=6, r_max=0, arc_prob=0.9)
        trees = list(enumerate_arborescences(inst))
        if not trees:
            continue
        cost = edmonds_mca(instance_graph(inst), 0).cost
        for parent in rng.sample(trees, min(10, len(trees))):
            assert cost <= sum(inst.cost[p, v] for v, p in parent.items())


def test_fractional_weights(backend):
    g = DiGraph.from_arcs(3, [(0, 1, 0.5), (0, 2, 0.75), (1, 2, 0.25)])
    assert edmonds_mca(g, 0).cost == pytest.approx(0.75)


def test_min_cut_flat_cut_right(backend):
    # r=0, "2"=1, "1"=2, "3"=3, s=4
    g = DiGraph.from_arcs(5, [(0, 1, 0.5), (0, 3, 1.0), (1, 2, 0.5), (2, 4, 0.5), (3, 4, 0.5)])
    cut = min_cut(g, 0, 4)
    assert cut.value == pytest.approx(1.0, abs=1e-9)
    assert cut.flow_value == pytest.approx(cut.value)
    assert 0 in cut.source_side and 4 not in cut.source_side


def test_min_cut_violated_cut_right(backend):
    # r=0, "2"=1, "1"=2, s=3
    g = DiGraph.from_arcs(4, [(0, 1, 0.5), (1, 2, 0.5), (1, 3, 0.5), (2, 3, 0.5)])
    cut = min_cut(g, 0, 3)
    assert cut.value == pytest.approx(0.5, abs=1e-9)
    assert cut.arcs == ((0, 1),)


def test_min_cut_disconnected(backend):
    g = DiGraph.from_arcs(3, [(0, 1, 1.0)])
    cut = min_cut(g, 0, 2)
    assert cut.value == 0 and cut.arcs == ()


def test_min_cut_rejects_same_endpoints(backend):
    with pytest.raises(ValueError):
        min_cut(DiGraph.from_arcs(2, [(0, 1, 1.0)]), 1, 1)


def _brute_min_cut(n, arcs, s, t):
    others = [v for v in range(n) if v not in (s, t)]
    best = float("inf")
    for bits in itertools.product((0, 1), repeat=len(others)):
        side = {s} | {v for v, b in zip(others, bits) if b}
        best = min(best, sum(w for u, v, w in arcs if u in side and v not in side))
    return best


def test_min_cut_matches_enumeration(backend):
    rng = random.Random(9)
    for _ in range(60):
        n = rng.randint(2, 7)
        arcs = [(i, j, rng.choice([0.0, 0.25, 0.5, 1.0, rng.random()])) for i in range(n) for j in range(n)
                if i != j and rng.random() < 0.5]
        g = DiGraph.from_arcs(n, arcs)
        s, t = rng.sample(range(n), 2)
        cut = min_cut(g, s, t)
        assert cut.value == pytest.approx(_brute_min_cut(n, arcs, s, t), abs=1e-9)
        assert cut.value == pytest.approx(cut.flow_value, abs=1e-9)
        crossing = sum(w for u, v, w in arcs if u in cut.source_side and v not in cut.source_side)
        assert crossing == pytest.approx(cut.value)


def test_backends_agree():
    if "cython" not in _backends():
        pytest.skip("compiled kernels not built")
    rng = random.Random(10)
    try:
        for _ in range(40):
            inst = random_instance(rng, n_max=8, r_max=0, arc_prob=0.8)
            g = instance_graph(inst)
            res = []
            for name in ("python", "cython"):
                graph.use_backend(name)
                try:
                    res.append(dict(edmonds_mca(g, 0).parent))
                except UnreachableError:
                    res.append(None)
            assert res[0] == res[1]
    finally:
        graph.use_backend("cython")


def test_allowed_predecessors():
    inst = precedence_example()
    assert allowed_predecessors(inst, 3) == {0, 2, 3}
    free = precedence_example(False)
    for j in (1, 2, 3):
        assert allowed_predecessors(free, j) == {0, 1, 2, 3}
    with pytest.raises(ValueError):
        allowed_predecessors(inst, 0)


def test_allowed_predecessors_definition():
    rng = random.Random(12)
    for _ in range(20):
        inst = random_instance(rng, n_min=6, n_max=6, r_max=10)
        R = set(inst.precedences)
        for j in range(1, 6):
            vj = allowed_predecessors(inst, j)
            assert {0, j} <= vj
            for i in range(6):
                assert (i in vj) == ((j, i) not in R)


def test_digraph_rejects_bad_arcs():
    with pytest.raises(ValueError):
        DiGraph.from_arcs(2, [(1, 1, 1.0)])
    with pytest.raises(ValueError):
        DiGraph.from_arcs(2, [(0, 1, -1.0)])


def test_vertex_subset():
    g = DiGraph.from_arcs(4, [(0, 1, 1.0), (1, 2, 1.0)], vertices=[0, 1, 2])
    assert g.active == {0, 1, 2}
    assert edmonds_mca(g, 0).cost == 2
    assert normalize(2, 0, [(0, 1, 1)]).n == 2
