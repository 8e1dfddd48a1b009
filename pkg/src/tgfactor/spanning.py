"""Oriented spanning trees and forests, and their weight polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .algebra import MultiPoly, Scalar, monomial
from .digraph import DiGraph
from .errors import GraphError, GuardError

TREE_GUARD = 10 ** 6


@dataclass(frozen=True, order=False)
class Forest:
    """Forest rooted in ``roots``: ``out[v]`` is the edge id leaving ``v``, -1 on roots."""

    roots: frozenset
    out: tuple[int, ...]

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(sorted(e for e in self.out if e >= 0))

    def sort_key(self):
        return (tuple(sorted(self.roots)), self.edge_ids)

    def to_json(self) -> dict:
        return {"roots": sorted(self.roots), "edges": list(self.edge_ids)}


@dataclass(frozen=True)
class SpanningTree:
    """Oriented spanning tree: every vertex but ``root`` has one out-edge ``out[v]``."""

    root: int
    out: tuple[int, ...]

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(sorted(e for e in self.out if e >= 0))

    def sort_key(self):
        return (self.root, self.edge_ids)

    def as_forest(self) -> Forest:
        return Forest(frozenset((self.root,)), self.out)

    def to_json(self) -> dict:
        return {"root": self.root, "edges": list(self.edge_ids)}


def enumerate_out_choices(n: int, out_lists: Sequence[Sequence[int]], targets: Sequence[int],
                          roots: Iterable[int], limit: int = TREE_GUARD) -> Iterator[tuple[int, ...]]:
    """Depth-first search over out-edge choices, rejecting cycles as they close.

    Works for multigraphs too: only ``targets[e]`` and the per-vertex lists of
    candidate out-edges are used.  Yields ``out`` tuples (-1 on roots).
    """
    roots = set(roots)
    free = [v for v in range(n) if v not in roots]
    out = [-1] * n
    head = [-1] * n  # target of the chosen out-edge, -1 while unassigned
    count = 0

    def closes_cycle(v: int, t: int) -> bool:
        u = t
        while u != v:
            u = head[u]
            if u == -1:
                return False
        return True

    def rec(k: int):
        nonlocal count
        if k == len(free):
            count += 1
            if count > limit:
                raise GuardError(f"more than {limit} spanning structures")
            yield tuple(out)
            return
        v = free[k]
        for e in out_lists[v]:
            t = targets[e]
            if closes_cycle(v, t):
                continue
            out[v], head[v] = e, t
            yield from rec(k + 1)
        out[v], head[v] = -1, -1

    yield from rec(0)


def _targets(g: DiGraph) -> list[int]:
    return [e.target for e in g.edges]


def enumerate_forests(g: DiGraph, w: Iterable[int], limit: int = TREE_GUARD) -> list[Forest]:
    """All oriented forests of ``g`` rooted in ``w``, in canonical order."""
    roots = frozenset(w)
    if not roots:
        raise GraphError("forest roots must be a nonempty vertex set")
    forests = [Forest(roots, out)
               for out in enumerate_out_choices(g.n, g.out_edges, _targets(g), roots, limit)]
    forests.sort(key=Forest.sort_key)
    return forests


def enumerate_rooted_trees(g: DiGraph, root: int, limit: int = TREE_GUARD) -> list[SpanningTree]:
    trees = [SpanningTree(root, out)
             for out in enumerate_out_choices(g.n, g.out_edges, _targets(g), (root,), limit)]
    trees.sort(key=SpanningTree.sort_key)
    return trees


def enumerate_spanning_trees(g: DiGraph, limit: int = TREE_GUARD) -> list[SpanningTree]:
    """All oriented spanning trees over all roots, ordered by (root, edge ids)."""
    trees: list[SpanningTree] = []
    for r in range(g.n):
        trees.extend(enumerate_rooted_trees(g, r, limit - len(trees)))
    return trees


def is_spanning_tree(g: DiGraph, a: SpanningTree) -> bool:
    """Structural check of ``a`` against ``g`` (out-edges, acyclicity)."""
    if len(a.out) != g.n or not 0 <= a.root < g.n or a.out[a.root] != -1:
        return False
    for v, e in enumerate(a.out):
        if v == a.root:
            continue
        if not 0 <= e < len(g.edges) or g.edges[e].source != v:
            return False
    for v in range(g.n):
        u, steps = v, 0
        while u != a.root:
            u = g.edges[a.out[u]].target
            steps += 1
            if steps > g.n:
                return False
    return True


# -- weights ----------------------------------------------------------------

EdgeWeight = Callable[[int], "MultiPoly | Scalar"]


def edge_var(e: int) -> str:
    return f"x_{e}"


def vertex_var(v: int) -> str:
    return f"y_{v}"


def forest_weight(f: Forest | SpanningTree, weight: EdgeWeight | None = None) -> MultiPoly:
    """Product of edge weights (``x_e`` by default); the empty forest gives 1."""
    if weight is None:
        exps: dict[str, int] = {}
        for e in f.edge_ids:
            exps[edge_var(e)] = exps.get(edge_var(e), 0) + 1
        return monomial(exps)
    result = MultiPoly.one()
    for e in f.edge_ids:
        result = result * weight(e)
    return result


tree_weight = forest_weight


def forest_value(f: Forest | SpanningTree, assignment: Mapping[str, Scalar]) -> Scalar:
    """Numeric weight under an assignment of the ``x_e``."""
    value = 1
    for e in f.edge_ids:
        value = value * assignment[edge_var(e)]
    return value


def generating_polynomial(structures: Iterable[Forest | SpanningTree],
                          weight: EdgeWeight | None = None) -> MultiPoly:
    """Sum of weights: ``F_G`` for trees, ``Psi_W`` for forests rooted in ``W``."""
    terms: dict = {}
    for s in structures:
        for m, c in forest_weight(s, weight).terms.items():
            terms[m] = terms.get(m, 0) + c
    return MultiPoly(terms)
