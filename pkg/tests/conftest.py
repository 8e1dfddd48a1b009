import random
import sys

import pytest
from hypothesis import strategies as st

from tgfactor.digraph import DiGraph
from tgfactor.families import complete_graph, cycle_graph, directed_cycle, random_suite


def four_vertex_example() -> DiGraph:
    """1->2, 1->4, 2->3, 2->4, 3->1, 3->4, 4->3: 14 spanning trees."""
    return DiGraph(["1", "2", "3", "4"],
                   [(0, 1), (0, 3), (1, 2), (1, 3), (2, 0), (2, 3), (3, 2)])


@pytest.fixture
def dcycle3():
    return directed_cycle(3)


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def two_cycle():
    return cycle_graph(2)


@pytest.fixture
def example4():
    return four_vertex_example()


@pytest.fixture(scope="session")
def suite():
    return random_suite(200, seed=0)


@st.composite
def strongly_connected_graphs(draw, min_n=1, max_n=5):
    """A Hamiltonian cycle in random order plus any extra edges."""
    n = draw(st.integers(min_n, max_n))
    order = draw(st.permutations(range(n)))
    pairs = {(order[i], order[(i + 1) % n]) for i in range(n)} if n > 1 else set()
    others = [(i, j) for i in range(n) for j in range(n) if i != j and (i, j) not in pairs]
    extra = draw(st.lists(st.sampled_from(others), unique=True)) if others else []
    return DiGraph([str(i + 1) for i in range(n)], sorted(pairs | set(extra)))


@st.composite
def digraphs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return DiGraph([str(i + 1) for i in range(n)], sorted(chosen))


def rng(seed=0):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
