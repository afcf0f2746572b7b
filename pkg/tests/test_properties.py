import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from arbx.evaluation import Arborescence, check_precedences, entry_times
from arbx.graph import DiGraph, edmonds_mca, instance_graph, min_cut
from arbx.instance import normalize, parse_native, parse_sop, write_native, write_sop

from _util import enumerate_arborescences

PROPS = settings(max_examples=60, deadline=None)


@st.composite
def instances(draw, n_max=6, cost_max=20):
    n = draw(st.integers(2, n_max))
    pairs = [(i, j) for i in range(n) for j in range(1, n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    arcs = [(i, j, draw(st.integers(0, cost_max))) for i, j in chosen]
    prec_pairs = [(s, t) for s in range(1, n) for t in range(1, n) if s != t]
    R = set()
    if prec_pairs:
        for s, t in draw(st.lists(st.sampled_from(prec_pairs), unique=True, max_size=5)):
            if (t, s) not in R:
                R.add((s, t))
    return normalize(n, 0, arcs, R, "h")


@st.composite
def flow_graphs(draw):
    n = draw(st.integers(2, 7))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return DiGraph.from_arcs(n, [(i, j, draw(st.integers(0, 15))) for i, j in chosen])


@PROPS
@given(instances())
def test_native_round_trip(inst):
    assert parse_native(write_native(inst)) == inst


@PROPS
@given(instances())
def test_sop_round_trip_keeps_graph_and_order(inst):
    back = parse_sop(write_sop(inst), name=inst.name)
    assert back.n == inst.n and set(back.precedences) == set(inst.precedences)
    # arcs survive unless they point backwards along a precedence
    kept = {(i, j): c for i, j, c in inst.arcs if (j, i) not in set(inst.precedences)}
    assert {k: v for k, v in back.cost.items() if k in kept} == kept


@PROPS
@given(flow_graphs())
def test_max_flow_equals_scipy(g):
    s, t = 0, g.n - 1
    cut = min_cut(g, s, t)
    assert cut.value == pytest.approx(cut.flow_value)
    assert s in cut.source_side and t not in cut.source_side
    cap = np.zeros((g.n, g.n), dtype=np.int32)
    for u, v, w in g.arcs:
        cap[u, v] += int(w)
    assert cut.value == maximum_flow(csr_matrix(cap), s, t).flow_value


@PROPS
@given(instances())
def test_telescoping_identity(inst):
    for parent in list(enumerate_arborescences(inst))[:6]:
        arbo = Arborescence.from_parent(inst, parent)
        if check_precedences(inst, arbo):
            continue
        try:
            ts = entry_times(inst, arbo)
        except ValueError:
            continue
        assert ts.objective == sum(ts.d[j] - ts.d[i] for j, i in parent.items())
        assert all(w >= 0 for w in ts.w.values())
        for s, t in inst.precedences:
            assert ts.d[t] >= ts.d[s]


@PROPS
@given(instances())
def test_edmonds_below_every_tree(inst):
    trees = list(enumerate_arborescences(inst))
    if not trees:
        return
    best = edmonds_mca(instance_graph(inst), 0)
    costs = [sum(inst.cost[p, v] for v, p in t.items()) for t in trees]
    assert best.cost == min(costs)
