"""The tree graph of a directed graph and its structural checks.

Vertices of the tree graph are the oriented spanning trees of ``G`` in
canonical order.  For a tree ``a`` with root ``r`` and an edge ``e = r -> t``
of ``G``, the move ``a + e - (out-edge of t)`` gives a tree ``b`` rooted at
``t``; the tree-graph edge ``a -> b`` is labelled by ``e`` (the projection).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from .digraph import DiGraph, tarjan, is_strongly_connected
from .errors import GraphError, GuardError, VerificationError
from .spanning import SpanningTree, enumerate_spanning_trees, enumerate_forests

EDGE_GUARD = 10 ** 6


@dataclass(frozen=True)
class TGEdge:
    id: int
    source: int  # tree index
    target: int  # tree index
    label: int  # edge id of G


@dataclass
class TreeGraph:
    base: DiGraph
    trees: list[SpanningTree]
    edges: list[TGEdge]
    index: dict = field(repr=False)  # out-tuple -> tree index

    @property
    def n(self) -> int:
        return len(self.trees)

    def root(self, i: int) -> int:
        """Projection of tree-graph vertex ``i`` to ``G``."""
        return self.trees[i].root

    @cached_property
    def out_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.trees]
        for e in self.edges:
            out[e.source].append(e.id)
        return out

    @cached_property
    def in_edges(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in self.trees]
        for e in self.edges:
            inc[e.target].append(e.id)
        return inc

    def as_digraph(self) -> DiGraph:
        """The tree graph as a plain ``DiGraph`` (edge ids preserved)."""
        return DiGraph([tree_label(self.base, a) for a in self.trees],
                       [(e.source, e.target) for e in self.edges])

    def is_strongly_connected(self) -> bool:
        succ = [[self.edges[e].target for e in out] for out in self.out_edges]
        return len(tarjan(self.n, succ)) == 1

    # -- export ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [tree_label(self.base, a) for a in self.trees],
            "trees": [a.to_json() for a in self.trees],
            "edges": [{"s": e.source, "t": e.target, "label": e.label} for e in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["digraph TG {"]
        for i, a in enumerate(self.trees):
            lines.append(f'  t{i} [label="{tree_label(self.base, a)}"];')
        for e in self.edges:
            lines.append(f'  t{e.source} -> t{e.target} [label="x_{e.label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def tree_label(g: DiGraph, a: SpanningTree) -> str:
    return f"{g.vertices[a.root]}:" + ",".join(str(e) for e in a.edge_ids)


def move(g: DiGraph, a: SpanningTree, e: int) -> SpanningTree:
    """Add ``e`` (leaving the root of ``a``) and drop the out-edge of its target."""
    edge = g.edges[e]
    if edge.source != a.root:
        raise GraphError(f"edge {e} does not leave the root of the tree")
    out = list(a.out)
    out[a.root] = e
    out[edge.target] = -1
    return SpanningTree(edge.target, tuple(out))


def build_tree_graph(g: DiGraph, edge_guard: int = EDGE_GUARD) -> TreeGraph:
    trees = enumerate_spanning_trees(g)
    if not trees:
        raise GraphError("G has no arborescence")
    index = {a.out: i for i, a in enumerate(trees)}
    edges: list[TGEdge] = []
    for i, a in enumerate(trees):
        for e in g.out_edges[a.root]:
            b = move(g, a, e)
            edges.append(TGEdge(len(edges), i, index[b.out], e))
            if len(edges) > edge_guard:
                raise GuardError(f"tree graph has more than {edge_guard} edges")
    tg = TreeGraph(g, trees, edges, index)
    if is_strongly_connected(g) and not tg.is_strongly_connected():
        raise VerificationError("tree graph of a strongly connected graph is not strongly connected")
    return tg


# -- covering -----------------------------------------------------------------


def check_covering(tg: TreeGraph, path: list[int], start: int) -> list[int]:
    """Unique lift of a path of ``G`` (edge ids) starting at tree ``start``.

    Returns the tree-graph edge ids of the lift.
    """
    g = tg.base
    if path and g.edges[path[0]].source != tg.root(start):
        raise GraphError("path does not start at the root of the start tree")
    lift = []
    cur = start
    for k, e in enumerate(path):
        if g.edges[e].source != tg.root(cur):
            raise GraphError(f"path is not connected at step {k}")
        hits = [f for f in tg.out_edges[cur] if tg.edges[f].label == e]
        if len(hits) != 1:
            raise VerificationError(f"{len(hits)} lifts of edge {e} at tree {cur}")
        lift.append(hits[0])
        cur = tg.edges[hits[0]].target
    return lift


# -- cycle partition ----------------------------------------------------------


@dataclass(frozen=True)
class LiftedCycle:
    cycle: tuple[int, ...]  # edge ids of the simple cycle C of G, in cyclic order
    forest: frozenset  # edge ids of the attached forest rooted on V(C)
    tg_edges: tuple[int, ...]  # tree-graph edges above C, in cyclic order

    def vertex_set(self, g: DiGraph) -> frozenset:
        return frozenset(g.edges[e].source for e in self.cycle)


def _cycle_of_edge(tg: TreeGraph, f: int) -> tuple[tuple[int, ...], frozenset]:
    """Simple cycle ``C`` and attached forest for the tree-graph edge ``f``.

    ``C`` is the path in ``a`` from ``t(e)`` to ``root(a)`` closed by ``e``.
    """
    g = tg.base
    te = tg.edges[f]
    a = tg.trees[te.source]
    e = g.edges[te.label]
    path = []
    u = e.target
    while u != a.root:
        path.append(a.out[u])
        u = g.edges[a.out[u]].target
    cycle = [te.label] + path
    # rotate so the cycle starts at its least edge id
    k = cycle.index(min(cycle))
    cycle = tuple(cycle[k:] + cycle[:k])
    forest = frozenset(a.edge_ids) - set(path)
    return cycle, forest


def cycle_partition(tg: TreeGraph) -> list[LiftedCycle]:
    """Partition the tree-graph edges into simple cycles above simple cycles of ``G``.

    Edges are grouped by (cycle, attached forest); each group is checked to be
    a simple cycle projecting bijectively onto its cycle of ``G``.
    """
    groups: dict = defaultdict(list)
    for f in range(len(tg.edges)):
        groups[_cycle_of_edge(tg, f)].append(f)
    result = []
    for (cycle, forest), members in groups.items():
        if len(members) != len(cycle):
            raise VerificationError(f"cycle {cycle} has {len(members)} lifted edges")
        by_source = {tg.edges[f].source: f for f in members}
        if len(by_source) != len(members):
            raise VerificationError("lifted cycle visits a tree twice")
        start = tg.edges[members[0]].source
        order, cur = [], start
        for _ in members:
            f = by_source.get(cur)
            if f is None:
                raise VerificationError("lifted edges do not form a cycle")
            order.append(f)
            cur = tg.edges[f].target
        if cur != start:
            raise VerificationError("lifted edges do not close up")
        if sorted(tg.edges[f].label for f in order) != sorted(cycle):
            raise VerificationError("lifted cycle does not project bijectively")
        result.append(LiftedCycle(cycle, forest, tuple(order)))
    result.sort(key=lambda c: (c.cycle, sorted(c.forest)))
    return result


def simple_cycles(g: DiGraph) -> list[tuple[int, ...]]:
    """All simple cycles of ``g`` as edge-id tuples starting at their least edge id.

    Brute-force DFS from each start vertex through larger vertices only.
    """
    found = set()
    for s in range(g.n):
        stack = [(s, [], {s})]
        while stack:
            v, path, seen = stack.pop()
            for e in g.out_edges[v]:
                t = g.edges[e].target
                if t == s:
                    cyc = path + [e]
                    k = cyc.index(min(cyc))
                    found.add(tuple(cyc[k:] + cyc[:k]))
                elif t > s and t not in seen:
                    stack.append((t, path + [e], seen | {t}))
    return sorted(found)


def check_cycle_partition(tg: TreeGraph) -> dict:
    """Compare lift counts above every simple cycle with forest counts."""
    g = tg.base
    parts = cycle_partition(tg)
    covered = sorted(f for c in parts for f in c.tg_edges)
    counts: dict = defaultdict(int)
    for c in parts:
        counts[c.cycle] += 1
    rows = []
    ok = covered == list(range(len(tg.edges)))
    for cyc in simple_cycles(g):
        w = frozenset(g.edges[e].source for e in cyc)
        expected = len(enumerate_forests(g, w))
        rows.append({"cycle": list(cyc), "vertices": g.label_set(w),
                     "lifts": counts.get(cyc, 0), "forests": expected})
        ok = ok and counts.get(cyc, 0) == expected
    ok = ok and set(counts) <= set(simple_cycles(g))
    return {"ok": ok, "edges": len(tg.edges), "cycles": len(parts), "rows": rows}


# -- Eulerian -----------------------------------------------------------------


def check_eulerian(tg: TreeGraph) -> dict:
    """In- and out-degree of each tree against the out-degree of its root."""
    violations = []
    for i in range(tg.n):
        want = tg.base.out_degree(tg.root(i))
        indeg, outdeg = len(tg.in_edges[i]), len(tg.out_edges[i])
        if indeg != want or outdeg != want:
            violations.append({"tree": i, "in": indeg, "out": outdeg, "expected": want})
    return {"ok": not violations, "violations": violations}
