import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teqlab.core import bits, from_arcs, in_masks, parse, random_tournament, subtournament, transitive
from teqlab.domgraph import (
    DominationGraph,
    NotAForest,
    StructureViolation,
    are_siblings,
    arc_parity,
    classify,
    domination_graph,
    find_brooms,
    tri_captain,
)
from teqlab.solutions import is_minimal_retentive_triple, teq

from .conftest import classes, classes_upto, tournaments

CYCLE3 = parse("010")


def test_cycle_captains():
    g = domination_graph(CYCLE3)
    assert g.captain_of == (1, 2, 0)
    assert g.directed_cycles() == [[0, 2, 1]]


def test_transitive_captains():
    g = domination_graph(transitive(3))
    assert g.captain_of == (None, 0, 0)
    assert g.directed_cycles() == []


@settings(deadline=None)
@given(tournaments(max_n=12))
def test_captain_definition(t):
    g = domination_graph(t)
    for v, u in enumerate(g.captain_of):
        others = [w for w in range(t.n) if w not in (u, v) and t.beats(w, v)]
        if u is None:
            assert not any(
                t.beats(c, v) and all(t.beats(c, w) for w in range(t.n) if w not in (c, v) and t.beats(w, v))
                for c in range(t.n)
                if c != v
            )
        else:
            assert t.beats(u, v) and all(t.beats(u, w) for w in others)


def test_captain_iff_singleton_teq_exhaustive():
    # Captain exists iff teq of the in-neighbourhood is that single vertex, for n <= 6.
    for t in classes_upto(6):
        g = domination_graph(t)
        for v, inn in enumerate(in_masks(t)):
            if not inn:
                assert g.captain_of[v] is None
                continue
            members = list(bits(inn))
            sets = teq(subtournament(t, inn)).minimal_sets
            single = len(sets) == 1 and sets[0].bit_count() == 1
            assert (g.captain_of[v] is not None) == single
            if single:
                assert members[sets[0].bit_length() - 1] == g.captain_of[v]


def test_classify_examples():
    v = classify(domination_graph(CYCLE3))
    assert v.kind == "spiked-odd-cycle" and len(v.cycle) == 3
    v = classify(domination_graph(transitive(3)))
    assert v.kind == "caterpillar-forest" and v.spines == ((0,),)
    assert classify(DominationGraph(3, (None, None, None))).kind == "empty"


def test_classify_never_errors_n7():
    kinds = {classify(domination_graph(t)).kind for t in classes(7)}
    assert kinds <= {"empty", "spiked-odd-cycle", "caterpillar-forest"}


def test_classify_rejects_non_fisher_graphs():
    # Two disjoint directed triangles cannot come from a tournament.
    g = DominationGraph(6, (2, 0, 1, 5, 3, 4))
    with pytest.raises(StructureViolation):
        classify(g)
    # An even cycle.
    with pytest.raises(StructureViolation):
        classify(DominationGraph(4, (3, 0, 1, 2)))
    # A spider with three legs of length two is a tree but not a caterpillar.
    spider = DominationGraph(7, (None, 0, 1, 0, 3, 0, 5))
    with pytest.raises(StructureViolation):
        classify(spider)


def test_tri_captain_examples():
    t = from_arcs(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)])
    assert tri_captain(t, 3) == 0b0111
    for v in range(5):
        assert tri_captain(transitive(5), v) is None


def test_tri_captain_matches_triple_characterisation():
    for t in classes_upto(6):
        for v, inn in enumerate(in_masks(t)):
            members = list(bits(inn))
            sub = subtournament(t, inn) if inn else None
            expected = None
            if sub is not None:
                for a, b, c in itertools.combinations(range(sub.n), 3):
                    if is_minimal_retentive_triple(sub, a, b, c):
                        expected = 1 << members[a] | 1 << members[b] | 1 << members[c]
            assert tri_captain(t, v, check_unique=True) == expected


def test_brooms():
    assert find_brooms(domination_graph(transitive(3)), 1) == []
    assert find_brooms(domination_graph(transitive(3)), 2) == []
    # u=0 -> v=1 -> {2, 3}
    g = DominationGraph(4, (None, 0, 1, 1))
    brooms = find_brooms(g, 2)
    assert len(brooms) == 1
    b = brooms[0]
    assert (b.head, b.center, b.leaves) == (0, 1, (2, 3))
    with pytest.raises(ValueError):
        find_brooms(g, 0)


def test_brooms_table1(table1):
    for t in table1:
        g = domination_graph(t)
        for k in range(1, t.n):
            for b in find_brooms(g, k):
                assert g.captain_of[b.center] == b.head
                assert sorted(g.slaves(b.center)) == list(b.leaves)


def test_siblings():
    # path x - v - y - u, labelled x=0, v=1, y=2, u=3
    path = DominationGraph(4, (None, 0, 1, 2))
    assert are_siblings(path, 1, 3)
    assert not are_siblings(path, 1, 2)
    assert are_siblings(DominationGraph(2, (None, 0)), 0, 1)
    assert not are_siblings(DominationGraph(4, (None, 0, None, 2)), 0, 2)
    with pytest.raises(NotAForest):
        are_siblings(domination_graph(CYCLE3), 0, 1)
    with pytest.raises(ValueError):
        are_siblings(path, 1, 1)


def test_arc_parity_examples():
    t = CYCLE3
    assert arc_parity(t, 0, 1, 0, 1) == "aligned"
    assert arc_parity(t, 0, 1, 1, 0) == "opposed"
    with pytest.raises(ValueError):
        arc_parity(t, 0, 0, 1, 2)


@given(st.integers(4, 10), st.randoms(use_true_random=False))
def test_arc_parity_composition(n, rnd):
    t = random_tournament(n, random.Random(rnd.random()))
    pairs = [rnd.sample(range(n), 2) for _ in range(3)]
    p, q, r = pairs
    x = arc_parity(t, *p, *q)
    y = arc_parity(t, *q, *r)
    z = arc_parity(t, *p, *r)
    assert z == ("aligned" if x == y else "opposed")


def test_export_formats():
    g = domination_graph(transitive(3))
    assert g.export_arcs() == "0>1\n0>2\n"
    assert classify(g).export() == "caterpillar-forest spines=0"
    assert classify(domination_graph(CYCLE3)).export() == "spiked-odd-cycle cycle=0,1,2"
