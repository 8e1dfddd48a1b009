from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import strongly_connected_graphs
from tgfactor.algebra import MultiPoly
from tgfactor.errors import GraphError, GuardError
from tgfactor.factorization import (Analysis, lifted_minors, phi_polynomial,
                                    verify_adjacency_factorization, verify_all,
                                    verify_main_theorem, verify_polbiane, verify_spanning_ratio)
from tgfactor.families import complete_graph, cycle_graph, path_graph
from tgfactor.operators import OperatorKind, build_lifted_operator, build_operator, delete
from tgfactor.spanning import edge_var


def test_directed_cycle_everything(dcycle3):
    reports = verify_all(dcycle3)
    assert all(r.ok for r in reports), [r.summary() for r in reports]
    assert phi_polynomial(dcycle3) == MultiPoly.one()
    main = reports[0]
    assert main.symbolic is True and [f["m"] for f in main.factors] == [1]


def test_directed_cycle_minor(dcycle3):
    an = Analysis.of(dcycle3)
    tg = an.tree_graph
    q = build_lifted_operator(tg, OperatorKind.LAPLACIAN)
    root1 = next(i for i, a in enumerate(tg.trees) if a.root == 0)
    x1, x2 = MultiPoly.var(edge_var(1)), MultiPoly.var(edge_var(2))
    # minors of Q carry (-1)^(|TV| - 1)
    assert delete(q, [root1]).det() == x1 * x2


def test_triangle_dimensions(triangle):
    report = verify_main_theorem(triangle, symbolic=True)
    assert report.ok and report.symbolic
    assert sorted(len(f["W"]) * f["m"] for f in report.factors) == [2, 2, 2, 3]


def test_example_exponents(example4):
    report = verify_main_theorem(example4)
    assert report.ok
    assert sorted(f["m"] for f in report.factors) == [1, 1, 2, 3]


def test_two_cycle(two_cycle):
    an = Analysis.of(two_cycle)
    assert verify_polbiane(an).ok
    one = {edge_var(0): 1, edge_var(1): 1}
    rep = verify_adjacency_factorization(an, one)
    z = MultiPoly.var("z")
    assert rep.ok and rep.trials[0].data["char_poly"] == z ** 2 - 1


def test_triangle_adjacency(triangle):
    rep = verify_adjacency_factorization(triangle)
    assert rep.ok and rep.trials[0].data["degree"] == 9


def test_spanning_ratio_counts(triangle):
    rep = verify_spanning_ratio(triangle)
    unit = {edge_var(e.id): 1 for e in triangle.edges}
    assert rep.ok and rep.symbolic
    assert rep.details["tree_graph_trees"] == phi_polynomial(triangle, unit) * 9


def test_bidirected_cycle_phi_is_product_of_minors():
    g = cycle_graph(4)
    neg_q = build_operator(g, OperatorKind.LAPLACIAN).negated()
    want = MultiPoly.one()
    for v in range(4):
        want = want * delete(neg_q, [v]).det()
    assert phi_polynomial(g) == want


def test_polbiane_sign_is_global(triangle):
    rep = verify_polbiane(triangle, trials=4)
    assert rep.ok and rep.details["signs"] == [rep.details["predicted_sign"]]


def test_adjugate_route_matches_direct():
    an = Analysis.of(complete_graph(4))
    asg = {edge_var(e.id): Fraction(e.id + 1, 3) for e in an.graph.edges}
    fast = lifted_minors(an, asg)
    q = build_lifted_operator(an.tree_graph, OperatorKind.LAPLACIAN, asg)
    assert [delete(q, [b]).det() for b in (0, 17, 63)] == [fast[0], fast[17], fast[63]]
    assert verify_polbiane(an).details["route"] == "adjugate"


def test_spanning_ratio_matrix_tree_route():
    rep = verify_spanning_ratio(complete_graph(3), enum_limit=10)
    assert rep.ok and rep.details["route"] == "matrix-tree" and rep.symbolic is None


@settings(max_examples=25, deadline=None)
@given(strongly_connected_graphs(max_n=4))
def test_all_identities(g):
    for r in verify_all(g, trials=2, seed=3):
        assert r.ok, r.summary()


def test_wrong_exponents_are_caught(triangle):
    an = Analysis.of(triangle)
    w = next(w for w, k in an.table.m.items() if k and len(w) == 2)
    an.table.m[w] += 1
    rep = verify_main_theorem(an, symbolic=False)
    assert not rep.ok and not rep.preflight and len(rep.failing()) == 3
    dumped = rep.to_json()["trials"][0]
    assert "assignment" in dumped and dumped["seed"] == rep.trials[0].seed


def test_guards_and_input_errors():
    with pytest.raises(GraphError):
        Analysis.of(path_graph(3))
    with pytest.raises(GuardError):
        verify_main_theorem(complete_graph(4), trials=0, symbolic=True)
    with pytest.raises(GuardError):
        verify_spanning_ratio(complete_graph(3), trials=0, symbolic=True, enum_limit=10)


def test_reports_are_deterministic(triangle):
    a = [r.to_json() for r in verify_all(triangle, seed=99)]
    b = [r.to_json() for r in verify_all(triangle, seed=99)]
    assert a == b
    assert a != [r.to_json() for r in verify_all(triangle, seed=100)]


def test_summary_lines(triangle):
    lines = [r.summary() for r in verify_all(triangle)]
    assert all(line.startswith("PASS ") for line in lines)
