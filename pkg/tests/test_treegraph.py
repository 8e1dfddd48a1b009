import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import strongly_connected_graphs
from tgfactor.errors import GuardError
from tgfactor.families import complete_graph, cycle_graph
from tgfactor.spanning import enumerate_forests, enumerate_spanning_trees, is_spanning_tree
from tgfactor.treegraph import (build_tree_graph, check_covering, check_cycle_partition,
                                check_eulerian, cycle_partition, move, simple_cycles)


def test_directed_cycle_tree_graph(dcycle3):
    tg = build_tree_graph(dcycle3)
    assert tg.n == 3 and len(tg.edges) == 3
    assert sorted((e.source, e.target) for e in tg.edges) == [(0, 1), (1, 2), (2, 0)]


def test_triangle_and_k3(triangle):
    tg = build_tree_graph(triangle)
    assert tg.n == 9 and len(tg.edges) == 18
    assert all(len(tg.out_edges[i]) == 2 for i in range(9))
    assert build_tree_graph(cycle_graph(3)).n == 9


def test_eulerian_examples(dcycle3, triangle):
    for g, d in [(dcycle3, 1), (triangle, 2), (complete_graph(4), 3)]:
        tg = build_tree_graph(g)
        assert check_eulerian(tg)["ok"]
        assert {len(tg.in_edges[i]) for i in range(tg.n)} == {d}


def test_move_produces_tree_rooted_at_target(triangle):
    for a in enumerate_spanning_trees(triangle):
        for e in triangle.out_edges[a.root]:
            b = move(triangle, a, e)
            assert is_spanning_tree(triangle, b) and b.root == triangle.edges[e].target


def test_covering_examples(dcycle3, triangle):
    tg = build_tree_graph(dcycle3)
    assert check_covering(tg, [], 0) == []
    lift = check_covering(tg, [0, 1, 2], 0)
    assert [tg.edges[f].label for f in lift] == [0, 1, 2]
    tg = build_tree_graph(triangle)
    start = 0
    r = tg.root(start)
    paths = [[e, f] for e in triangle.out_edges[r] for f in triangle.out_edges[triangle.edges[e].target]]
    assert len(paths) == 4
    for p in paths:
        assert [tg.edges[f].label for f in check_covering(tg, p, start)] == p


def test_cycle_partition_examples(dcycle3, triangle, two_cycle):
    parts = cycle_partition(build_tree_graph(dcycle3))
    assert len(parts) == 1 and len(parts[0].tg_edges) == 3
    parts = cycle_partition(build_tree_graph(two_cycle))
    assert len(parts) == 1
    tg = build_tree_graph(triangle)
    counts = {}
    for c in cycle_partition(tg):
        counts[c.cycle] = counts.get(c.cycle, 0) + 1
    two_cycles = [c for c in simple_cycles(triangle) if len(c) == 2]
    # two forests are rooted in any 2-set of the triangle
    assert all(counts[c] == 2 == len(enumerate_forests(triangle, {triangle.edges[e].source for e in c}))
               for c in two_cycles)
    assert check_cycle_partition(tg)["ok"]


@settings(max_examples=40, deadline=None)
@given(strongly_connected_graphs(max_n=4))
def test_structure(g):
    tg = build_tree_graph(g)
    assert tg.n == len(enumerate_spanning_trees(g))
    assert tg.is_strongly_connected()
    assert check_eulerian(tg)["ok"]
    assert check_cycle_partition(tg)["ok"]
    for f in tg.edges:
        assert g.edges[f.label].source == tg.root(f.source)
        assert g.edges[f.label].target == tg.root(f.target)


@settings(max_examples=30, deadline=None)
@given(strongly_connected_graphs(min_n=2, max_n=4), st.data())
def test_unique_lift(g, data):
    tg = build_tree_graph(g)
    start = data.draw(st.integers(0, tg.n - 1))
    v, path = tg.root(start), []
    for _ in range(data.draw(st.integers(0, 6))):
        e = data.draw(st.sampled_from(g.out_edges[v]))
        path.append(e)
        v = g.edges[e].target
    lift = check_covering(tg, path, start)
    assert [tg.edges[f].label for f in lift] == path


def test_exports(dcycle3):
    tg = build_tree_graph(dcycle3)
    assert tg.to_dot().startswith("digraph TG {")
    data = tg.to_json()
    assert len(data["vertices"]) == 3 and len(data["edges"]) == 3


def test_edge_guard():
    with pytest.raises(GuardError):
        build_tree_graph(complete_graph(4), edge_guard=10)
