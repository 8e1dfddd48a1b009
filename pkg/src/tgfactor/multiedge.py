"""Multigraphs, reduced to simple digraphs by subdividing every edge.

The midpoint of edge ``e`` gets the in-half ``s(e) -> mid`` (weight ``x_e``)
and the out-half ``mid -> t(e)`` (weight 1), so corresponding spanning trees
have equal weights.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property

from .digraph import DiGraph, parse_graph_json
from .errors import GraphError, VerificationError
from .families import NamedGraph
from .spanning import TREE_GUARD, edge_var, enumerate_out_choices

log = logging.getLogger(__name__)


class MultiDiGraph:
    """Directed multigraph; loops are dropped on ingest."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex labels")
        n = len(self.vertices)
        kept, loops = [], 0
        for s, t in edges:
            if not (0 <= s < n and 0 <= t < n):
                raise GraphError(f"edge ({s}, {t}) has an endpoint outside 0..{n - 1}")
            if s == t:
                loops += 1
                continue
            kept.append((s, t))
        if loops:
            log.warning("dropped %d loop(s)", loops)
        self.dropped_loops = loops
        self.edges: tuple[tuple[int, int], ...] = tuple(kept)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __repr__(self):
        return f"MultiDiGraph(|V|={self.n}, |E|={len(self.edges)})"

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.vertices]
        for i, (s, _) in enumerate(self.edges):
            out[s].append(i)
        return tuple(map(tuple, out))

    def trees_rooted_at(self, v: int, limit: int = TREE_GUARD) -> list[tuple[int, ...]]:
        """Out-edge tuples (-1 at ``v``) of the spanning trees rooted at ``v``."""
        targets = [t for _, t in self.edges]
        return sorted(enumerate_out_choices(self.n, self.out_edges, targets, (v,), limit))

    def to_json(self) -> dict:
        return {"multi": True, "vertices": [str(v) for v in self.vertices],
                "edges": [{"s": s, "t": t} for s, t in self.edges]}

    @classmethod
    def from_json(cls, data) -> "MultiDiGraph":
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise GraphError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        vertices, pairs = parse_graph_json(data)
        return cls(vertices, pairs)


@dataclass
class Subdivision:
    base: MultiDiGraph
    simple: DiGraph
    edge_map: dict  # original edge id -> (midpoint, in-half id, out-half id)

    def midpoint(self, e: int) -> int:
        return self.edge_map[e][0]

    def named(self) -> NamedGraph:
        """The subdivided graph with in-halves named ``x_<original edge id>``."""
        names = {}
        for e, (_, inner, outer) in self.edge_map.items():
            names[inner] = edge_var(e)
            names[outer] = None
        return NamedGraph(self.simple, names)

    def lift_tree(self, out: tuple[int, ...], root: int | None = None,
                  via: int | None = None) -> tuple[int, ...]:
        """Image of a tree of the multigraph (out-edge tuple) in the subdivision.

        Original vertices use the in-half of their tree edge; midpoints use
        their out-half, except the midpoint of ``via`` which becomes the root
        (``via`` then joins the tree at its source).
        """
        n = self.base.n
        new = [-1] * self.simple.n
        for u in range(n):
            if out[u] >= 0:
                new[u] = self.edge_map[out[u]][1]
        if via is not None:
            new[self.base.edges[via][0]] = self.edge_map[via][1]
        for e, (mid, _, outer) in self.edge_map.items():
            if e != via:
                new[mid] = outer
        return tuple(new)


def subdivide(mg: MultiDiGraph) -> Subdivision:
    """Insert a midpoint on every edge; midpoints follow the original vertices."""
    n = mg.n
    labels = list(mg.vertices)
    pairs, edge_map = [], {}
    for e, (s, t) in enumerate(mg.edges):
        mid = n + e
        labels.append(f"{mg.vertices[s]}~{mg.vertices[t]}#{e}")
        edge_map[e] = (mid, 2 * e, 2 * e + 1)
        pairs += [(s, mid), (mid, t)]
    simple = DiGraph(labels, pairs)
    for e, (mid, inner, outer) in edge_map.items():
        s, t = mg.edges[e]
        if simple.edges[inner].source != s or simple.edges[outer].target != t:
            raise VerificationError("subdivision edge ids out of order")
    if simple.n != n + len(mg.edges) or len(simple.edges) != 2 * len(mg.edges):
        raise VerificationError("subdivision has the wrong size")
    return Subdivision(mg, simple, edge_map)


def _simple_trees(g: DiGraph, root: int) -> set[tuple[int, ...]]:
    return set(enumerate_out_choices(g.n, g.out_edges, [e.target for e in g.edges], (root,)))


def transfer_trees(sub: Subdivision, v: int) -> dict:
    """Check the tree bijections for root ``v`` and for midpoints of edges leaving ``v``.

    Raises :class:`VerificationError` if a mapping is not a bijection.
    """
    mg = sub.base
    if not 0 <= v < mg.n:
        raise GraphError(f"{v} is not an original vertex")
    trees = mg.trees_rooted_at(v)
    lifted = {sub.lift_tree(out) for out in trees}
    target = _simple_trees(sub.simple, v)
    if len(lifted) != len(trees) or lifted != target:
        raise VerificationError(f"tree bijection fails at root {mg.vertices[v]}")
    mids = []
    for e in mg.out_edges[v]:
        mid = sub.midpoint(e)
        image = {sub.lift_tree(out, via=e) for out in trees}
        at_mid = _simple_trees(sub.simple, mid)
        if len(image) != len(trees) or image != at_mid:
            raise VerificationError(f"midpoint bijection fails on edge {e}")
        mids.append({"edge": e, "midpoint": str(sub.simple.vertices[mid]), "trees": len(at_mid)})
    return {"root": str(mg.vertices[v]), "trees": len(trees),
            "subdivided_trees": len(target), "midpoints": mids, "ok": True}
