"""Simple directed graphs with a fixed vertex order.

Vertices are addressed by their 0-based position in ``DiGraph.vertices``;
that position order is the total order used by every "by increasing source"
rule downstream.  Vertex sets are ``frozenset[int]``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import GraphError, GuardError

log = logging.getLogger(__name__)

SUBSET_GUARD = 14


@dataclass(frozen=True)
class Edge:
    id: int
    source: int
    target: int


class DiGraph:
    """Finite simple directed graph.

    Loops are dropped (they never occur in spanning trees) and recorded in
    ``dropped_loops``; parallel edges in the same direction are rejected.
    """

    def __init__(self, vertices: Sequence[Hashable], edges: Iterable[tuple[int, int]]):
        self.vertices: tuple = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex labels")
        n = len(self.vertices)
        seen: set[tuple[int, int]] = set()
        kept = []
        self.dropped_loops: tuple[int, ...] = ()
        loops = []
        for s, t in edges:
            if not (0 <= s < n and 0 <= t < n):
                raise GraphError(f"edge ({s}, {t}) has an endpoint outside 0..{n - 1}")
            if s == t:
                loops.append(s)
                continue
            if (s, t) in seen:
                raise GraphError(
                    f"parallel edge {self.vertices[s]}->{self.vertices[t]}; "
                    "use tgfactor.multiedge for multigraphs")
            seen.add((s, t))
            kept.append((s, t))
        if loops:
            self.dropped_loops = tuple(loops)
            log.warning("dropped %d loop(s) at %s", len(loops),
                        ", ".join(str(self.vertices[v]) for v in loops))
        self.edges: tuple[Edge, ...] = tuple(Edge(i, s, t) for i, (s, t) in enumerate(kept))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self):
        return f"DiGraph(|V|={self.n}, |E|={len(self.edges)})"

    def __eq__(self, other):
        if not isinstance(other, DiGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids leaving each vertex, by increasing target."""
        out: list[list[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            out[e.source].append(e.id)
        return tuple(tuple(sorted(o, key=lambda i: self.edges[i].target)) for o in out)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids entering each vertex, by increasing source."""
        inc: list[list[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            inc[e.target].append(e.id)
        return tuple(tuple(sorted(i, key=lambda j: self.edges[j].source)) for i in inc)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(e.source, e.target): e.id for e in self.edges}

    @cached_property
    def _out_mask(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for e in self.edges:
            masks[e.source] |= 1 << e.target
        return tuple(masks)

    @cached_property
    def _in_mask(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for e in self.edges:
            masks[e.target] |= 1 << e.source
        return tuple(masks)

    def index(self, label: Hashable) -> int:
        return self.vertices.index(label)

    def out_degree(self, v: int) -> int:
        return len(self.out_edges[v])

    def label_set(self, vs: Iterable[int]) -> list:
        return [self.vertices[v] for v in sorted(vs)]

    def reordered(self, perm: Sequence[int]) -> "DiGraph":
        """Same graph with vertex ``perm[i]`` placed at position ``i``.

        Edge ids are reassigned in the order of the original edge list.
        """
        pos = {old: new for new, old in enumerate(perm)}
        if sorted(pos) != list(range(self.n)):
            raise GraphError("not a permutation of the vertices")
        return DiGraph([self.vertices[old] for old in perm],
                       [(pos[e.source], pos[e.target]) for e in self.edges])

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {"vertices": [str(v) for v in self.vertices],
                "edges": [{"s": e.source, "t": e.target} for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "DiGraph":
        vertices, pairs = parse_graph_json(data)
        return cls(vertices, pairs)


def parse_graph_json(data) -> tuple[list, list[tuple[int, int]]]:
    """Validate the JSON graph schema; returns (vertex labels, (s, t) pairs).

    Accepts a parsed object or a JSON string.  Errors name the offending field.
    """
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise GraphError("graph must be a JSON object")
    if "vertices" not in data or not isinstance(data["vertices"], list):
        raise GraphError("field 'vertices': expected a list")
    if "edges" not in data or not isinstance(data["edges"], list):
        raise GraphError("field 'edges': expected a list")
    vertices = data["vertices"]
    n = len(vertices)
    pairs = []
    for k, e in enumerate(data["edges"]):
        if not isinstance(e, dict):
            raise GraphError(f"edges[{k}]: expected an object with 's' and 't'")
        for key in ("s", "t"):
            val = e.get(key)
            if not isinstance(val, int) or isinstance(val, bool):
                raise GraphError(f"edges[{k}].{key}: expected an integer vertex index")
            if not 0 <= val < n:
                raise GraphError(f"edges[{k}].{key}: index {val} out of range 0..{n - 1}")
        pairs.append((e["s"], e["t"]))
    return vertices, pairs


# -- connectivity ---------------------------------------------------------


def _mask_of(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _set_of(mask: int) -> frozenset:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def _reach(adj: Sequence[int], start: int, within: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def _mask_strongly_connected(g: DiGraph, mask: int) -> bool:
    if not mask:
        return False
    start = (mask & -mask).bit_length() - 1
    return (_reach(g._out_mask, start, mask) == mask
            and _reach(g._in_mask, start, mask) == mask)


def is_strongly_connected(g: DiGraph) -> bool:
    """Every ordered pair of vertices is joined by a directed path."""
    if g.n == 0:
        return False
    return _mask_strongly_connected(g, (1 << g.n) - 1)


def induced_subgraph(g: DiGraph, w: Iterable[int]) -> DiGraph:
    """``G_W``: vertices of ``w`` in inherited order, edges with both ends in ``w``."""
    keep = sorted(set(w))
    if not keep:
        raise GraphError("empty subset")
    if keep[0] < 0 or keep[-1] >= g.n:
        raise GraphError("subset contains a vertex outside the graph")
    pos = {v: i for i, v in enumerate(keep)}
    return DiGraph([g.vertices[v] for v in keep],
                   [(pos[e.source], pos[e.target]) for e in g.edges
                    if e.source in pos and e.target in pos])


def strongly_connected_subsets(g: DiGraph, guard: int = SUBSET_GUARD) -> list[frozenset]:
    """All nonempty ``W`` with ``G_W`` strongly connected, by ascending bitmask.

    Singletons count as strongly connected.
    """
    if g.n > guard:
        raise GuardError(f"subset enumeration limit: |V| = {g.n} > {guard}")
    return [_set_of(mask) for mask in range(1, 1 << g.n) if _mask_strongly_connected(g, mask)]


def is_strongly_connected_subset(g: DiGraph, w: Iterable[int]) -> bool:
    return _mask_strongly_connected(g, _mask_of(w))


def tarjan(n: int, successors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Strongly connected components (iterative Tarjan), in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            succ = successors[v]
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(comp)
    return comps


def scc_components(g: DiGraph, x: Iterable[int]) -> list[frozenset]:
    """Strongly connected components of ``G_X``, ordered by least vertex."""
    xs = sorted(set(x))
    if not xs:
        return []
    pos = {v: i for i, v in enumerate(xs)}
    succ: list[list[int]] = [[] for _ in xs]
    for e in g.edges:
        if e.source in pos and e.target in pos:
            succ[pos[e.source]].append(pos[e.target])
    comps = [frozenset(xs[i] for i in c) for c in tarjan(len(xs), succ)]
    return sorted(comps, key=min)
