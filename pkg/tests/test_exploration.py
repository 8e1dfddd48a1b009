import random

import pytest
from hypothesis import given, settings

from conftest import strongly_connected_graphs
from tgfactor.digraph import DiGraph, strongly_connected_subsets
from tgfactor.errors import GraphError
from tgfactor.exploration import (athanasiadis_multiplicity, athanasiadis_table, athanasiadis_weights,
                                  bfs_tree, explore, multiplicity_table)
from tgfactor.families import complete_graph, cycle_graph, path_graph
from tgfactor.spanning import SpanningTree, enumerate_spanning_trees


def by_labels(g, table):
    return {frozenset(g.vertices[v] for v in w): k for w, k in table.items() if k}


def test_directed_cycle(dcycle3):
    a = enumerate_spanning_trees(dcycle3)[0]
    res = explore(dcycle3, a)
    assert res.phi == res.psi == frozenset(range(3)) and not res.erased
    t = multiplicity_table(dcycle3)
    assert t.nonzero() == {frozenset(range(3)): 1}


def test_erasure_scenario(example4):
    g = example4
    # root 3, tree edges 2->3, 4->3, 1->4; the edge 1->2 is scanned and erases 1
    ids = g.edge_index
    out = [ids[(0, 3)], ids[(1, 2)], -1, ids[(3, 2)]]
    res = explore(g, SpanningTree(2, tuple(out)))
    assert res.phi == {1, 2, 3}
    assert 0 in res.erased
    assert res.psi == {2, 3}
    assert res.erased == res.boundary


def test_example_multiplicities(example4):
    t = multiplicity_table(example4)
    assert t.tree_count == 14
    assert by_labels(example4, t.m) == {frozenset("4"): 3, frozenset("34"): 2,
                                        frozenset("134"): 1, frozenset("1234"): 1}
    assert len(t.subsets) - 1 == 7


def test_cycle_and_complete_tables():
    g = cycle_graph(3)
    assert by_labels(g, multiplicity_table(g).m) == {
        frozenset("12"): 1, frozenset("13"): 1, frozenset("23"): 1, frozenset("123"): 1}
    for n in (3, 4, 5):
        t = multiplicity_table(complete_graph(n))
        for w, k in t.m.items():
            assert k == ((len(w) - 1) * (n - 1) ** (n - len(w) - 1) if len(w) < n else 1)


def test_bfs_examples(dcycle3, triangle):
    assert bfs_tree(dcycle3, 0).edge_ids == (1, 2)
    a = bfs_tree(triangle, 0)
    assert sorted((triangle.edges[e].source, triangle.edges[e].target) for e in a.edge_ids) == [(1, 0), (2, 0)]
    with pytest.raises(GraphError):
        bfs_tree(path_graph(3), 0)


def test_not_a_tree_rejected(dcycle3):
    with pytest.raises(GraphError):
        explore(dcycle3, SpanningTree(0, (-1, 0, 2)))


@settings(max_examples=60, deadline=None)
@given(strongly_connected_graphs(max_n=6))
def test_bfs_tree_has_full_psi(g):
    for v in range(g.n):
        assert explore(g, bfs_tree(g, v)).psi == frozenset(range(g.n))


@settings(max_examples=60, deadline=None)
@given(strongly_connected_graphs(max_n=5))
def test_exploration_invariants(g):
    for a in enumerate_spanning_trees(g):
        res = explore(g, a)
        assert a.root in res.psi and res.psi <= res.phi
        assert res.erased == res.boundary
        assert res.phi.isdisjoint(res.erased)
        # phi is closed under the tree path to the root
        for v in res.phi:
            if v != a.root:
                assert g.edges[a.out[v]].target in res.phi


@settings(max_examples=40, deadline=None)
@given(strongly_connected_graphs(max_n=5))
def test_table_invariants(g):
    t = multiplicity_table(g)
    assert t.degree_sum() == t.tree_count
    assert t.m[frozenset(range(g.n))] == 1
    assert set(t.m) == set(strongly_connected_subsets(g))


@settings(max_examples=25, deadline=None)
@given(strongly_connected_graphs(max_n=5))
def test_order_independence(g):
    base = multiplicity_table(g).by_labels()
    rnd = random.Random(g.n * 1000 + len(g.edges))
    for _ in range(3):
        perm = list(range(g.n))
        rnd.shuffle(perm)
        assert multiplicity_table(g.reordered(perm)).by_labels() == base


@settings(max_examples=40, deadline=None)
@given(strongly_connected_graphs(max_n=5))
def test_oracle_agrees(g):
    assert athanasiadis_table(g) == multiplicity_table(g).m


def test_oracle_examples(dcycle3, triangle):
    weights = athanasiadis_weights(dcycle3)
    assert athanasiadis_multiplicity(dcycle3, range(3), weights) == weights[0b111] == 1
    assert athanasiadis_multiplicity(dcycle3, [0], weights) == 0
    assert all(athanasiadis_multiplicity(triangle, w) == 1 for w in ([0, 1], [0, 2], [1, 2]))
    with pytest.raises(GraphError):
        athanasiadis_multiplicity(DiGraph(["a", "b"], [(0, 1)]), [0, 1])
