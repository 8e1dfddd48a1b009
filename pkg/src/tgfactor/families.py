"""Graph families with known answers, and the random suite.

Generators return plain :class:`DiGraph` objects.  Families whose edges carry
named weights (bouquets, hypercubes) also return ``names``: edge id -> symbol,
with ``None`` meaning weight 1.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .algebra import MultiPoly
from .digraph import DiGraph, is_strongly_connected
from .errors import GraphError


def directed_cycle(n: int) -> DiGraph:
    if n < 2:
        raise GraphError("a directed cycle needs at least 2 vertices")
    return DiGraph([str(i + 1) for i in range(n)], [(i, (i + 1) % n) for i in range(n)])


def cycle_graph(n: int) -> DiGraph:
    """Bidirected cycle on ``1..n``; for ``n == 2`` the single 2-cycle."""
    if n < 2:
        raise GraphError("a cycle needs at least 2 vertices")
    pairs = {(i, (i + 1) % n) for i in range(n)} | {((i + 1) % n, i) for i in range(n)}
    return DiGraph([str(i + 1) for i in range(n)], sorted(pairs))


def complete_graph(n: int) -> DiGraph:
    if n < 1:
        raise GraphError("K_n needs n >= 1")
    return DiGraph([str(i + 1) for i in range(n)],
                   [(i, j) for i in range(n) for j in range(n) if i != j])


def path_graph(n: int) -> DiGraph:
    return DiGraph([str(i + 1) for i in range(n)], [(i, i + 1) for i in range(n - 1)])


# -- weighted families ------------------------------------------------------


@dataclass
class NamedGraph:
    graph: DiGraph
    names: dict  # edge id -> symbol name, or None for weight 1

    def weight(self, e: int) -> MultiPoly:
        name = self.names.get(e)
        return MultiPoly.one() if name is None else MultiPoly.var(name)

    def symbols(self) -> list[str]:
        return sorted({s for s in self.names.values() if s is not None})

    def edge_assignment(self, values: dict, default=1) -> dict:
        """Assignment of the ``x_e`` induced by values of the named symbols."""
        from .spanning import edge_var

        return {edge_var(e.id): values[self.names[e.id]] if self.names.get(e.id) else default
                for e in self.graph.edges}


def bouquet(ns) -> NamedGraph:
    """Hub ``0``, petal centres ``1..k``, leaves ``v_i^j`` for ``j <= n_i``.

    Edges ``0 -> i`` (weight ``s_i``), ``i -> v_i^j`` (``x_i^j``) and
    ``v_i^j -> 0`` (1).
    """
    ns = list(ns)
    if not ns or any(n < 1 for n in ns):
        raise GraphError("bouquet needs k >= 1 petals of size >= 1")
    k = len(ns)
    labels = ["0"] + [str(i) for i in range(1, k + 1)]
    leaf = {}
    for i, n in enumerate(ns, 1):
        for j in range(1, n + 1):
            leaf[i, j] = len(labels)
            labels.append(f"v{i}^{j}")
    pairs, names = [], []
    for i in range(1, k + 1):
        pairs.append((0, i))
        names.append(f"s{i}")
    for (i, j), v in leaf.items():
        pairs.append((i, v))
        names.append(f"x{i}^{j}")
    for v in leaf.values():
        pairs.append((v, 0))
        names.append(None)
    g = DiGraph(labels, pairs)
    by_pair = dict(zip(pairs, names))
    return NamedGraph(g, {e.id: by_pair[(e.source, e.target)] for e in g.edges})


def bouquet_petal(g: DiGraph, i: int) -> frozenset:
    """Centre and leaves of petal ``i``."""
    return frozenset(v for v, lab in enumerate(g.vertices)
                     if lab == str(i) or lab.startswith(f"v{i}^"))


def hypercube(k: int) -> NamedGraph:
    """Bidirected ``{0,1}^k``; the edge setting coordinate ``i`` to ``j`` is named ``y{i}^{j}``."""
    if k < 1:
        raise GraphError("hypercube dimension must be >= 1")
    points = list(itertools.product((0, 1), repeat=k))
    pos = {p: n for n, p in enumerate(points)}
    pairs, names = [], []
    for p in points:
        for i in range(k):
            q = p[:i] + (1 - p[i],) + p[i + 1:]
            pairs.append((pos[p], pos[q]))
            names.append(f"y{i + 1}^{q[i]}")
    g = DiGraph(["".join(map(str, p)) for p in points], pairs)
    by_pair = dict(zip(pairs, names))
    return NamedGraph(g, {e.id: by_pair[(e.source, e.target)] for e in g.edges})


# -- random suite -------------------------------------------------------------


def random_strongly_connected(n: int, rng: random.Random, p: float | None = None,
                              attempts: int = 1000) -> DiGraph:
    """Rejection sampling of ``G(n, p)`` digraphs until strongly connected."""
    if n == 1:
        return DiGraph(["1"], [])
    for _ in range(attempts):
        q = rng.uniform(0.3, 0.8) if p is None else p
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < q]
        g = DiGraph([str(i + 1) for i in range(n)], pairs)
        if is_strongly_connected(g):
            return g
    raise GraphError(f"no strongly connected sample after {attempts} attempts")


def random_suite(count: int = 200, seed: int = 0, sizes=(2, 5)) -> list[DiGraph]:
    rng = random.Random(seed)
    lo, hi = sizes
    return [random_strongly_connected(rng.randint(lo, hi), rng) for _ in range(count)]


def random_multigraph(n: int, rng: random.Random, max_mult: int = 3) -> list[tuple[int, int]]:
    """Edge list with multiplicities in ``0..max_mult`` per ordered pair, loops included."""
    pairs = []
    for i in range(n):
        for j in range(n):
            pairs.extend([(i, j)] * rng.randint(0, max_mult if i != j else 1))
    return pairs
