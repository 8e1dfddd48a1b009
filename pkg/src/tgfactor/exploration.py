"""Exploration of a spanning tree and the multiplicities it defines.

``explore`` is the ordered breadth-first exploration with erasure: starting at
the root, edges are scanned first-in first-out; an edge in the tree admits its
source, any other edge erases its source.  ``phi`` is the admitted set and
``psi`` the strongly connected component of the root inside it.

``m(W, w)`` counts trees rooted at ``w`` with ``psi == W``.  The signed-sum
multiplicity ``n(W)`` from the adjacency-spectrum approach is provided as an
independent oracle.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import det_bareiss
from .digraph import (DiGraph, is_strongly_connected, is_strongly_connected_subset,
                      scc_components, strongly_connected_subsets)
from .errors import GraphError, VerificationError
from .operators import OperatorKind, build_operator
from .spanning import SpanningTree, edge_var, enumerate_spanning_trees, is_spanning_tree


@dataclass(frozen=True)
class ExplorationResult:
    phi: frozenset
    psi: frozenset
    erased: frozenset
    boundary: frozenset
    discovery_order: tuple[int, ...]
    erase_witness: dict = field(hash=False, compare=False)  # erased vertex -> edge id


def explore(g: DiGraph, a: SpanningTree, check: bool = True) -> ExplorationResult:
    if check and not is_spanning_tree(g, a):
        raise GraphError("not a spanning tree of the graph")
    edges = g.edges
    root = a.root
    in_tree = set(a.edge_ids)
    admitted = {root}
    order = [root]
    pending = {e.id for e in edges if e.source != root}  # the set F
    dead: set[int] = set()  # deleted from the queue for good
    queue = deque(g.in_edges[root])
    pending.difference_update(queue)
    witness: dict[int, int] = {}
    while queue:
        e = queue.popleft()
        if e in dead:
            continue
        w = edges[e].source
        if e in in_tree:
            admitted.add(w)
            order.append(w)
            # out-edges of w are never scanned, even if re-appended from F later
            dead.update(g.out_edges[w])
            for f in g.in_edges[w]:
                if f in pending:
                    pending.discard(f)
                    queue.append(f)
        else:
            witness[w] = e
            for f in g.out_edges[w] + g.in_edges[w]:
                dead.add(f)
                pending.discard(f)
    phi = frozenset(admitted)
    psi = next(c for c in scc_components(g, phi) if root in c)
    boundary = frozenset(v for v in range(g.n) if v not in phi
                         and any(edges[f].target in phi for f in g.out_edges[v]))
    return ExplorationResult(phi, psi, frozenset(witness), boundary, tuple(order), witness)


def bfs_tree(g: DiGraph, v: int) -> SpanningTree:
    """The tree of first discovery when searching backwards from ``v``.

    Same queue discipline as :func:`explore` with every scanned edge admitted.
    """
    if not is_strongly_connected(g):
        raise GraphError("graph is not strongly connected")
    out = [-1] * g.n
    admitted = {v}
    queue = deque(g.in_edges[v])
    while queue:
        e = queue.popleft()
        w = g.edges[e].source
        if w in admitted:
            continue
        admitted.add(w)
        out[w] = e
        queue.extend(f for f in g.in_edges[w] if g.edges[f].source not in admitted)
    return SpanningTree(v, tuple(out))


# -- multiplicities -----------------------------------------------------------


@dataclass
class MultiplicityTable:
    graph: DiGraph
    subsets: list[frozenset]  # strongly connected subsets, bitmask order
    raw: dict  # (W, w) -> m(W, w)
    witnesses: dict  # (W, w) -> list of tree indices
    m: dict  # W -> m(W)
    tree_count: int

    def nonzero(self) -> dict:
        return {w: k for w, k in self.m.items() if k}

    def degree_sum(self) -> int:
        return sum(len(w) * k for w, k in self.m.items())

    def by_labels(self) -> dict:
        return {frozenset(self.graph.vertices[v] for v in w): k for w, k in self.m.items()}

    def to_json(self) -> list:
        g = self.graph
        return [{"W": g.label_set(w), "m": self.m[w],
                 "witnesses": {str(g.vertices[v]): self.witnesses.get((w, v), [])
                               for v in sorted(w)}}
                for w in self.subsets]


def multiplicity_table(g: DiGraph, trees: Sequence[SpanningTree] | None = None) -> MultiplicityTable:
    """Run the exploration on every spanning tree and bucket by (psi, root).

    Raises ``VerificationError`` if ``m(W, w)`` depends on ``w`` or the counts
    do not add up to the number of trees.
    """
    if not is_strongly_connected(g):
        raise GraphError("graph is not strongly connected")
    if trees is None:
        trees = enumerate_spanning_trees(g)
    subsets = strongly_connected_subsets(g)
    witnesses: dict = defaultdict(list)
    for i, a in enumerate(trees):
        res = explore(g, a, check=False)
        witnesses[(res.psi, a.root)].append(i)
    raw = {(w, v): len(witnesses.get((w, v), ())) for w in subsets for v in sorted(w)}
    if set(witnesses) - set(raw):
        raise VerificationError("exploration returned a set that is not strongly connected")
    m = {}
    for w in subsets:
        values = {raw[(w, v)] for v in w}
        if len(values) != 1:
            raise VerificationError(
                f"m(W, w) depends on w for W = {g.label_set(w)}: "
                f"{ {g.vertices[v]: raw[(w, v)] for v in sorted(w)} }")
        m[w] = values.pop()
    if sum(raw.values()) != len(trees):
        raise VerificationError("multiplicities do not account for every tree")
    return MultiplicityTable(g, subsets, raw, dict(witnesses), m, len(trees))


# -- signed-sum oracle ----------------------------------------------------------


def athanasiadis_weights(g: DiGraph) -> dict:
    """``l(X) = det(Gamma - I)`` for every vertex set ``X`` (bitmask keys).

    ``Gamma`` is the Laplacian with every ``x_e = -1`` and the rows and
    columns of ``X`` deleted, so ``Gamma - I`` is ``D - A - I`` on ``V - X``.
    Taking the adjacency block ``M_X`` instead gives ``l(V) = -2`` on a
    directed triangle, which cannot be an exponent of the spectrum.
    """
    q = build_operator(g, OperatorKind.LAPLACIAN, {edge_var(e.id): -1 for e in g.edges})
    base = [[int(x) - (i == j) for j, x in enumerate(row)] for i, row in enumerate(q.rows)]
    n = g.n
    out = {}
    for mask in range(1 << n):
        rest = [v for v in range(n) if not mask >> v & 1]
        out[mask] = det_bareiss([[base[i][j] for j in rest] for i in rest])
    return out


def athanasiadis_multiplicity(g: DiGraph, w_set: Iterable[int], weights: dict | None = None) -> int:
    """``n(W) = sum of l(X)`` over the ``X`` having ``W`` as a strongly connected component."""
    w = frozenset(w_set)
    if not w or not is_strongly_connected_subset(g, w):
        raise GraphError("w_set is not strongly connected")
    if weights is None:
        weights = athanasiadis_weights(g)
    wmask = sum(1 << v for v in w)
    total = 0
    for mask, lx in weights.items():
        if mask & wmask != wmask or not lx:
            continue
        xs = [v for v in range(g.n) if mask >> v & 1]
        if w in scc_components(g, xs):
            total += lx
    return total


def athanasiadis_table(g: DiGraph) -> dict:
    weights = athanasiadis_weights(g)
    return {w: athanasiadis_multiplicity(g, w, weights) for w in strongly_connected_subsets(g)}
