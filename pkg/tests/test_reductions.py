import itertools
import random

import pytest

from arbx.evaluation import Arborescence, check_precedences
from arbx.instance import ParseError, normalize
from arbx.reductions import (
    ROOT,
    S,
    S_PRIME,
    T,
    CnfFormula,
    RsaPointSet,
    from_3sat,
    from_rsa,
    hanan_grid,
    literal_vertex,
    read_dimacs,
    read_points,
    rsa_brute_force,
    satisfiability_from_solution,
)
from arbx.solver import SolverLimits, brute_force_pcmca, solve_pcmca, solve_pcmcawt

from _util import enumerate_arborescences

BIG = SolverLimits(brute_force_cap=10)


def _feasible_trees(inst):
    for parent in enumerate_arborescences(inst):
        arbo = Arborescence.from_parent(inst, parent)
        if not check_precedences(inst, arbo):
            yield arbo


def test_single_clause():
    f = CnfFormula(1, ((1, 1, 1),))
    inst = from_3sat(f)
    assert inst.n == 7
    tree = brute_force_pcmca(inst)
    assert tree is not None
    assert satisfiability_from_solution(f, tree) == {1: True}


def test_unsatisfiable_pair():
    f = CnfFormula(1, ((1, 1, 1), (-1, -1, -1)))
    assert not f.is_satisfiable()
    inst = from_3sat(f)
    assert inst.n == 10
    assert brute_force_pcmca(inst, BIG) is None
    assert solve_pcmca(inst)[0] is None


def test_counts():
    f = CnfFormula(4, ((1, 2, 3), (2, 3, 4), (1, -4, 2), (3, 4, 1)))
    inst = from_3sat(f)
    m = len(f.clauses)
    assert inst.n == 3 * m + 4
    layer = [(i, j) for i, j, _ in inst.arcs if 4 <= i < inst.n and 4 <= j < inst.n]
    # clause 3 holds -4, clause 2 and 4 hold 4: two opposite pairs drop two layer arcs
    assert len(layer) == 9 * (m - 1) - 2
    assert all(c == 1 for _, _, c in inst.arcs)
    assert (T, S_PRIME) in inst.precedences
    assert normalize(inst.n, inst.root, inst.arcs, inst.precedences, inst.name) == inst


def test_no_opposites_gives_full_layers():
    f = CnfFormula(3, ((1, 2, 3), (1, 2, 3), (3, 2, 1)))
    inst = from_3sat(f)
    layer = [(i, j) for i, j, _ in inst.arcs if 4 <= i and 4 <= j]
    assert len(layer) == 9 * 2
    assert inst.precedences == ((T, S_PRIME),)


def test_extracted_assignment_satisfies():
    f = CnfFormula(2, ((1, -2, -2), (-1, 2, 2)))
    inst = from_3sat(f)
    tree = brute_force_pcmca(inst, BIG)
    a = satisfiability_from_solution(f, tree)
    assert a is not None and f.evaluate(a)


def test_forced_literal_in_every_path():
    # layer 1 is all x1, so layer 2 must pick x2
    f = CnfFormula(2, ((1, 1, 1), (-1, 2, 2)))
    inst = from_3sat(f)
    trees = list(_feasible_trees(inst))
    assert trees
    for arbo in trees:
        path = arbo.path_to(T)
        assert path[:2] == [ROOT, S]
        assert path[3] in (literal_vertex(1, 1), literal_vertex(1, 2))
        assert satisfiability_from_solution(f, arbo) == {1: True, 2: True}


def test_infeasible_tree_gives_none():
    f = CnfFormula(1, ((1, 1, 1),))
    inst = from_3sat(f)
    # t hangs below s' instead of the clause chain
    parent = {S: ROOT, S_PRIME: ROOT, 4: S_PRIME, 5: S_PRIME, 6: S_PRIME, T: 4}
    assert satisfiability_from_solution(f, Arborescence.from_parent(inst, parent)) is None


def test_symmetric_variant_small():
    for f in [CnfFormula(1, ((1, 1, 1), (-1, -1, -1))), CnfFormula(2, ((1, -2, 2), (-1, 2, -2)))]:
        inst = from_3sat(f, symmetric=True)
        assert (solve_pcmca(inst)[0] is not None) == f.is_satisfiable()


def test_dimacs():
    f = read_dimacs("c demo\np cnf 3 2\n1 -2 3 0\n-1 2 2 0\n")
    assert f == CnfFormula(3, ((1, -2, 3), (-1, 2, 2)))
    for bad in ["1 2 3 0\n", "p cnf 2 1\n1 2 0\n", "p cnf 2 2\n1 2 2 0\n", "p cnf 2 1\n1 2 x 0\n",
                "p cnf 2 1\n1 2 2\n", "p dnf 2 1\n1 2 2 0\n"]:
        with pytest.raises(ParseError):
            read_dimacs(bad)
    with pytest.raises(ValueError):
        CnfFormula(1, ((1, 2, 1),))


def test_rsa_example_counts():
    pts = RsaPointSet(((0, 0), (2, 0), (3, 1), (4, 2), (1, 2)))
    coords, arcs = hanan_grid(pts)
    assert len(coords) - 5 == 10
    inst = from_rsa(pts)
    assert pts.far == 3
    assert sorted(inst.precedences) == [(0, 3), (1, 3), (2, 3), (4, 3)]
    zero = [(i, j) for i, j, c in inst.arcs if i == 3 and j >= 5]
    assert len(zero) == 10


def test_two_point_grid():
    coords, arcs = hanan_grid(RsaPointSet(((0, 0), (2, 3))))
    assert len(coords) == 4 and len(coords) - 2 == 2
    assert sorted(c for _, _, c in arcs) == [2, 2, 3, 3]


@pytest.mark.parametrize(
    "points,length",
    [(((0, 0), (1, 0)), 1), (((0, 0), (1, 0), (0, 1)), 2), (((0, 0), (1, 1), (2, 2)), 4)],
)
def test_rsa_brute_force_examples(points, length):
    pts = RsaPointSet(points)
    assert rsa_brute_force(pts) == length
    ts, st = solve_pcmcawt(from_rsa(pts))
    assert ts.objective == length


def test_rsa_points_reader():
    pts = read_points("# origin first\n0 0\n1 2\n3 0\n")
    assert pts.points == ((0, 0), (1, 2), (3, 0))
    for bad in ["1 1\n", "0 0\n0 0\n", "0 0\n-1 2\n"]:
        with pytest.raises(ValueError):
            read_points(bad)
    with pytest.raises(ParseError):
        read_points("0 0\n1\n")


def test_rsa_steiner_leaves_free_and_paths_monotone():
    rng = random.Random(61)
    for _ in range(10):
        k = rng.randint(2, 4)
        others = rng.sample([(x, y) for x in range(4) for y in range(4) if (x, y) != (0, 0)], k - 1)
        pts = RsaPointSet(((0, 0), *others))
        inst = from_rsa(pts)
        coords, _ = hanan_grid(pts)
        ts, st = solve_pcmcawt(inst)
        assert st.status == "optimal"
        parent = ts.arborescence.parent
        children = {p for p in parent.values()}
        for v, p in parent.items():
            if v >= k and v not in children:
                assert inst.cost[p, v] == 0
        for v in range(1, k):
            for a, b in zip(ts.arborescence.path_to(v), ts.arborescence.path_to(v)[1:]):
                if a == pts.far and b >= k:
                    continue
                assert coords[b][0] >= coords[a][0] and coords[b][1] >= coords[a][1]
