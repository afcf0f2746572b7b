import random

import pytest

from arbx.evaluation import Arborescence, check_precedences
from arbx.graph import min_cut
from arbx.instance import normalize
from arbx.separation import (
    EPS,
    FractionalSolution,
    build_dj,
    find_violated_inequality,
    separate_all,
)

from _util import FLAT_CUT_X, VIOLATED_CUT_X, enumerate_arborescences, precedence_example, flat_cut_example, violated_cut_example, random_instance


def test_flat_cut_dj():
    g = build_dj(flat_cut_example(), 5, FLAT_CUT_X)
    assert 1 not in g.active
    weights = {(u, v): w for u, v, w in g.arcs if w > 0}
    assert weights == {(0, 3): 0.5, (0, 4): 1.0, (3, 2): 0.5, (2, 5): 0.5, (4, 5): 0.5}


def test_flat_cut_not_separated():
    inst = flat_cut_example()
    assert min_cut(build_dj(inst, 5, FLAT_CUT_X), 0, 5).value == pytest.approx(1.0, abs=1e-6)
    assert find_violated_inequality(inst, FLAT_CUT_X) is None
    assert separate_all(inst, FLAT_CUT_X) == []


def test_violated_cut_cut():
    inst = violated_cut_example()
    g = build_dj(inst, 4, VIOLATED_CUT_X)
    assert sorted((u, v) for u, v, w in g.arcs if w > 0) == [(0, 3), (2, 4), (3, 2), (3, 4)]
    assert all(w == 0.5 for _, _, w in g.arcs if w > 0)
    cut = find_violated_inequality(inst, VIOLATED_CUT_X)
    assert cut is not None and cut.target == 4
    assert cut.crossing == ((0, 3),)
    assert cut.value == pytest.approx(0.5, abs=1e-9)
    assert cut.violation == pytest.approx(0.5, abs=1e-9)
    assert 4 in cut.S and 0 not in cut.S
    cuts = separate_all(inst, VIOLATED_CUT_X)
    assert cuts and cuts[0].crossing == ((0, 3),)


def test_integral_precedence_example_violation():
    inst = precedence_example()
    x = FractionalSolution.from_arborescence(Arborescence.from_parent(inst, {1: 0, 2: 1, 3: 2}))
    cut = find_violated_inequality(inst, x)
    assert cut is not None and cut.target == 3
    assert cut.value == 0


def test_integral_equivalence_with_precedence_check():
    rng = random.Random(31)
    for _ in range(60):
        inst = random_instance(rng, n_min=3)
        for parent in list(enumerate_arborescences(inst))[:8]:
            arbo = Arborescence.from_parent(inst, parent)
            x = FractionalSolution.from_arborescence(arbo)
            assert (find_violated_inequality(inst, x) is None) == (not check_precedences(inst, arbo))
            if not check_precedences(inst, arbo):
                assert separate_all(inst, x) == []


def _random_fractional(rng, inst):
    x = {}
    for j in range(1, inst.n):
        ins = [i for i, _ in inst.in_arcs[j]]
        if not ins:
            continue
        w = [rng.random() for _ in ins]
        tot = sum(w)
        for i, v in zip(ins, w):
            x[i, j] = v / tot
    return x


def test_random_cuts_are_violated():
    rng = random.Random(32)
    found = 0
    for _ in range(100):
        inst = random_instance(rng, n_min=6, n_max=6, r_max=6)
        x = _random_fractional(rng, inst)
        for cut in separate_all(inst, x):
            found += 1
            lhs = sum(x.get(a, 0.0) for a in cut.crossing)
            assert lhs < 1 - EPS
            assert cut.lhs(FractionalSolution(x)) == pytest.approx(lhs)
            assert cut.target in cut.S and inst.root not in cut.S
            vj = set(range(inst.n)) - inst.successors[cut.target]
            assert cut.S <= vj
            expected = sorted((i, k) for i, k, _ in inst.arcs if i in vj - cut.S and k in cut.S)
            assert sorted(cut.crossing) == expected
    assert found > 20


def test_separation_complete_relative_to_cuts():
    rng = random.Random(33)
    for _ in range(60):
        inst = random_instance(rng, n_min=4, n_max=6)
        x = _random_fractional(rng, inst)
        any_low = any(
            min_cut(build_dj(inst, j, x), 0, j).value < 1 - EPS for j in range(1, inst.n)
        )
        assert (find_violated_inequality(inst, x) is not None) == any_low


def test_sorted_by_violation_and_deterministic():
    rng = random.Random(34)
    for _ in range(30):
        inst = random_instance(rng, n_min=5, n_max=7)
        x = _random_fractional(rng, inst)
        cuts = separate_all(inst, x)
        assert [c.violation for c in cuts] == sorted((c.violation for c in cuts), reverse=True)
        assert separate_all(inst, x) == cuts
        assert find_violated_inequality(inst, x) == find_violated_inequality(inst, x)


def test_empty_r_dj_is_whole_graph():
    inst = precedence_example(False)
    g = build_dj(inst, 3, {(0, 1): 1.0})
    assert g.active == {0, 1, 2, 3}
    assert len(g.arcs) == len(inst.arcs)


def test_solution_bounds_checked():
    inst = normalize(2, 0, [(0, 1, 1)])
    with pytest.raises(ValueError):
        FractionalSolution({(0, 1): 1.5}).check(inst)
    with pytest.raises(ValueError):
        FractionalSolution({(1, 0): 1.0}).check(inst)
