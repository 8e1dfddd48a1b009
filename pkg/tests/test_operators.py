import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import digraphs, strongly_connected_graphs
from tgfactor.algebra import MultiPoly, random_assignment
from tgfactor.digraph import DiGraph
from tgfactor.errors import GraphError
from tgfactor.operators import (OperatorKind, build_lifted_operator, build_operator, delete,
                                left_apply, matrix_tree_det, operator_variables, restrict)
from tgfactor.spanning import (edge_var, enumerate_forests, enumerate_rooted_trees,
                               forest_value, generating_polynomial, vertex_var)
from tgfactor.treegraph import build_tree_graph

L, Q, M = OperatorKind.SCHRODINGER, OperatorKind.LAPLACIAN, OperatorKind.ADJACENCY


def unit(g):
    return {edge_var(e.id): 1 for e in g.edges}


def test_single_vertex_schrodinger():
    g = DiGraph(["v"], [])
    assert build_operator(g, L).rows == ((MultiPoly.var(vertex_var(0)),),)


def test_directed_cycle_operators(dcycle3):
    assert build_operator(dcycle3, Q, unit(dcycle3)).rows == ((-1, 1, 0), (0, -1, 1), (1, 0, -1))
    assert build_operator(dcycle3, M, unit(dcycle3)).rows == ((0, 1, 0), (0, 0, 1), (1, 0, 0))
    assert delete(build_operator(dcycle3, Q, unit(dcycle3)), [0]).rows == ((-1, 1), (0, -1))


def test_restrict_and_delete(two_cycle, triangle):
    lap = build_operator(two_cycle, L)
    assert restrict(lap, [0]).rows == ((MultiPoly.var(vertex_var(0)) - MultiPoly.var(edge_var(0)),),)
    assert restrict(lap, [0, 1]) == lap
    assert delete(lap, []) == lap
    assert delete(lap, [0, 1]).det() == 1
    assert restrict(build_operator(triangle, Q, unit(triangle)), [1]).rows == ((-2,),)
    with pytest.raises(GraphError):
        restrict(lap, [5])


def test_matrix_tree_examples(dcycle3, triangle):
    assert matrix_tree_det(triangle, range(3), unit(triangle)) == 1
    assert matrix_tree_det(dcycle3, [0], unit(dcycle3)) == 1
    assert matrix_tree_det(triangle, [0], unit(triangle)) == 3


@settings(max_examples=40, deadline=None)
@given(digraphs(max_n=5))
def test_matrix_tree_theorem_symbolic(g):
    for r in range(1, g.n + 1):
        for w in itertools.combinations(range(g.n), r):
            assert matrix_tree_det(g, w, "symbolic") == generating_polynomial(enumerate_forests(g, w))


@settings(max_examples=40, deadline=None)
@given(strongly_connected_graphs(max_n=5))
def test_row_sums_vanish(g):
    tg = build_tree_graph(g)
    for m in (build_operator(g, Q), build_lifted_operator(tg, Q)):
        assert all(sum(row, MultiPoly.zero()) == MultiPoly.zero() for row in m.rows)


@settings(max_examples=40, deadline=None)
@given(strongly_connected_graphs(max_n=4))
def test_lifted_diagonal_is_root_diagonal(g):
    tg = build_tree_graph(g)
    small, lifted = build_operator(g, Q), build_lifted_operator(tg, Q)
    assert all(lifted.rows[i][i] == small.rows[tg.root(i)][tg.root(i)] for i in range(tg.n))


def test_lift_of_directed_cycle_is_itself(dcycle3):
    tg = build_tree_graph(dcycle3)
    lifted = build_lifted_operator(tg, L)
    small = build_operator(dcycle3, L)
    perm = [tg.root(i) for i in range(tg.n)]
    assert all(lifted.rows[i][j] == small.rows[perm[i]][perm[j]] for i in range(3) for j in range(3))


@settings(max_examples=40, deadline=None)
@given(strongly_connected_graphs(max_n=5))
def test_markov_chain_tree_theorem(g):
    asg = random_assignment(operator_variables(g), 11, 0)
    mu = [sum(forest_value(a, asg) for a in enumerate_rooted_trees(g, v)) for v in range(g.n)]
    assert all(x == 0 for x in left_apply(mu, build_operator(g, Q, asg)))
    assert all(x > 0 for x in mu)


def test_values_are_exact_fractions(triangle):
    asg = {edge_var(e.id): Fraction(1, e.id + 2) for e in triangle.edges}
    q = build_operator(triangle, Q, asg)
    assert q.rows[0][1] == Fraction(1, 2) and q.rows[0][0] == -Fraction(1, 2) - Fraction(1, 3)
