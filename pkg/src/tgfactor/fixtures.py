"""Builtin graphs and the closed-form checks that come with them.

``builtin_graph("cycle:4")`` parses the names accepted by the command line;
:func:`family_checks` runs the family-specific formulas for one instance and
:func:`builtin_examples` runs all of them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod

from .algebra import MultiPoly, det_exact, monomial, product
from .digraph import DiGraph
from .errors import GraphError
from .factorization import (DEFAULT_SEED, Analysis, lifted_minors, phi_polynomial,
                            verify_main_theorem)
from .families import (NamedGraph, bouquet, bouquet_petal, complete_graph, cycle_graph,
                       hypercube)
from .operators import OperatorKind, build_operator, matrix_tree_det, restrict
from .spanning import edge_var, enumerate_forests, enumerate_rooted_trees, generating_polynomial
from .treegraph import build_tree_graph

HEAVY_TREES = 150  # lifted dimension above which the builtin run skips det(L) trials


@dataclass
class ExampleCheck:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "details": {k: (str(v) if isinstance(v, (Fraction, MultiPoly)) else v)
                            for k, v in self.details.items()}}


def parse_builtin(name: str) -> tuple[str, list[int]]:
    name = name.removeprefix("builtin:")
    family, _, arg = name.partition(":")
    if family not in ("cycle", "complete", "bouquet", "hypercube") or not arg:
        raise GraphError(f"unknown builtin {name!r}; expected cycle:n, complete:n, "
                         "bouquet:n1,n2,... or hypercube:n")
    try:
        args = [int(a) for a in arg.split(",")]
    except ValueError:
        raise GraphError(f"builtin {name!r}: arguments must be integers") from None
    if family != "bouquet" and len(args) != 1:
        raise GraphError(f"builtin {family} takes one size")
    return family, args


def builtin_named(name: str) -> NamedGraph:
    family, args = parse_builtin(name)
    if family == "bouquet":
        return bouquet(args)
    if family == "hypercube":
        return hypercube(args[0])
    g = cycle_graph(args[0]) if family == "cycle" else complete_graph(args[0])
    return NamedGraph(g, {e.id: edge_var(e.id) for e in g.edges})


def builtin_graph(name: str) -> DiGraph:
    return builtin_named(name).graph


# -- cycle and complete graph ----------------------------------------------------


def check_cycle(n: int) -> list[ExampleCheck]:
    an = Analysis.of(cycle_graph(n))
    g, v = an.graph, an.vertex_set
    expected = {w: int(len(w) >= n - 1) for w in an.table.m}
    out = [ExampleCheck(f"cycle:{n} tree count n^2", an.tree_graph.n == n * n,
                        {"trees": an.tree_graph.n}),
           ExampleCheck(f"cycle:{n} multiplicities", an.table.m == expected,
                        {"nonzero": {",".join(g.label_set(w)): k for w, k in an.table.nonzero().items()}})]
    neg_q = build_operator(g, OperatorKind.LAPLACIAN, "symbolic").negated()
    minors = product((restrict(neg_q, v - {u}).det() for u in range(n)), MultiPoly.one())
    out.append(ExampleCheck(f"cycle:{n} cofactor is the product of (n-1)-minors",
                            phi_polynomial(an) == minors))
    return out


def check_complete(n: int) -> list[ExampleCheck]:
    an = Analysis.of(complete_graph(n))
    bad = [sorted(w) for w, k in an.table.m.items()
           if k != (len(w) - 1) * (n - 1) ** (n - len(w) - 1) if len(w) < n or k != 1]
    unit = {edge_var(e.id): 1 for e in an.graph.edges}
    phi1 = phi_polynomial(an, unit)
    count = (-1) ** (an.tree_graph.n - 1) * sum(lifted_minors(an, unit))
    closed = n ** (n - 2) * prod(((n - k) * n ** (k - 1)) ** ((k - 1) * (n - 1) ** (n - k - 1) * comb(n, k))
                                 for k in range(1, n))
    return [
        ExampleCheck(f"complete:{n} tree count n^(n-1)", an.tree_graph.n == n ** (n - 1),
                     {"trees": an.tree_graph.n}),
        ExampleCheck(f"complete:{n} multiplicities (k-1)(n-1)^(n-k-1)", not bad,
                     {"violations": bad}),
        # the product formula below is reported, not asserted: it is short by a factor n
        ExampleCheck(f"complete:{n} trees of the tree graph", count == phi1 * n ** (n - 1),
                     {"matrix_tree": count, "cofactor_times_trees": phi1 * n ** (n - 1),
                      "closed_form": closed, "closed_form_agrees": closed == count}),
    ]


# -- bouquets -----------------------------------------------------------------------


def bouquet_sets(ns) -> dict:
    """``W_I`` (hub plus the petals in ``I``) for every ``I``, keyed by ``I``."""
    g = bouquet(ns).graph
    k = len(ns)
    return {I: frozenset({0}).union(*(bouquet_petal(g, i) for i in I))
            for r in range(k + 1) for I in itertools.combinations(range(1, k + 1), r)}


def _petal_sum(I, ns, scale=1):
    return {i: sum((MultiPoly.var(f"x{i}^{j}") * scale for j in range(1, ns[i - 1] + 1)),
                   MultiPoly.zero()) for i in I}


def bouquet_cofactor(ns) -> MultiPoly:
    """Closed form of the cofactor for the bouquet with petal sizes ``ns``."""
    k = len(ns)
    out = MultiPoly.one()
    for I in bouquet_sets(ns):
        if len(I) == k:
            continue
        s = sum((MultiPoly.var(f"s{i}") for i in range(1, k + 1) if i not in I), MultiPoly.zero())
        m = prod(ns[i - 1] - 1 for i in range(1, k + 1) if i not in I)
        out = out * (s * product(_petal_sum(I, ns).values(), MultiPoly.one())) ** m
    return out


def refined_bouquet_det(ns, I, z, w, values) -> Fraction:
    """Closed form of ``det(zI - Q)`` on ``W_I`` with leaves weighted by ``w``."""
    k = len(ns)
    x = {i: sum(Fraction(values[f"x{i}^{j}"]) for j in range(1, ns[i - 1] + 1)) for i in I}
    s = {i: Fraction(values[f"s{i}"]) for i in range(1, k + 1)}

    def petal(i):
        return (z + w * x[i]) * (w + z) ** ns[i - 1]

    total = (z + sum(s[i] for i in s if i not in I)) * prod((petal(i) for i in I), start=Fraction(1))
    for i0 in I:
        n0 = ns[i0 - 1]
        head = z * w * x[i0] * (w + z) ** (n0 - 1) + z * (w + z) ** n0
        total += s[i0] * head * prod((petal(i) for i in I if i != i0), start=Fraction(1))
    return total


def check_bouquet(ns, seed: int = DEFAULT_SEED, trials: int = 3) -> list[ExampleCheck]:
    ns = list(ns)
    tag = "bouquet:" + ",".join(map(str, ns))
    bq = bouquet(ns)
    an = Analysis.of(bq.graph)
    g, v = an.graph, an.vertex_set
    sets = bouquet_sets(ns)
    want = {w: 0 for w in an.table.m}
    for I, w in sets.items():
        want[w] = prod(ns[i - 1] - 1 for i in range(1, len(ns) + 1) if i not in I)
    out = [ExampleCheck(f"{tag} multiplicities", an.table.m == want,
                        {"nonzero": {",".join(g.label_set(w)): k for w, k in an.table.nonzero().items()}})]

    rng = random.Random(f"{seed}:{tag}")
    symbols = bq.symbols()
    bad_minor = []
    for t in range(trials):
        values = {s: rng.randint(1, 2 ** 20) for s in symbols}
        for I, w in sets.items():
            if w == v:
                continue
            s = sum(values[f"s{i}"] for i in range(1, len(ns) + 1) if i not in I)
            closed = s * prod(sum(values[f"x{i}^{j}"] for j in range(1, ns[i - 1] + 1)) for i in I)
            if matrix_tree_det(g, v - w, bq.edge_assignment(values)) != closed:
                bad_minor.append(list(I))
    out.append(ExampleCheck(f"{tag} forest minors on W_I", not bad_minor, {"violations": bad_minor}))
    out.append(ExampleCheck(f"{tag} cofactor closed form",
                            phi_polynomial(an, "symbolic", bq.weight) == bouquet_cofactor(ns)))
    if an.tree_graph.n <= HEAVY_TREES:
        report = verify_main_theorem(an, trials=trials, seed=seed, symbolic=False)
        out.append(ExampleCheck(f"{tag} determinant factorization", report.ok,
                                {"lifted_dimension": an.tree_graph.n}))
    if len(ns) <= 2:
        out.append(_check_refined(bq, ns, sets, rng, tag))
    return out


def _check_refined(bq: NamedGraph, ns, sets, rng, tag) -> ExampleCheck:
    g = bq.graph
    v = frozenset(range(g.n))
    bad = []
    for _ in range(3):
        z, w = rng.randint(1, 2 ** 10), rng.randint(1, 2 ** 10)
        values = {s: rng.randint(1, 2 ** 10) for s in bq.symbols()}
        asg = {}
        for e in g.edges:
            name = bq.names[e.id]
            if name is None:
                asg[edge_var(e.id)] = w
            elif name.startswith("x"):
                asg[edge_var(e.id)] = w * values[name]
            else:
                asg[edge_var(e.id)] = values[name]
        q = build_operator(g, OperatorKind.LAPLACIAN, asg)
        for I, ws in sets.items():
            if ws == v:
                continue
            sub = restrict(q, ws)
            shifted = [[(z if i == j else 0) - x for j, x in enumerate(row)]
                       for i, row in enumerate(sub.rows)]
            if det_exact(shifted) != refined_bouquet_det(ns, I, z, w, values):
                bad.append({"I": list(I), "z": z, "w": w})
    return ExampleCheck(f"{tag} refined determinant in (z, w)", not bad, {"violations": bad})


# -- hypercube ----------------------------------------------------------------------


def stanley_count(k: int) -> int:
    return prod((2 * i) ** comb(k, i) for i in range(1, k + 1))


def hypercube_tree_count(k: int) -> int:
    """Rooted spanning trees of the cube, by the matrix-tree theorem at unit weights."""
    g = hypercube(k).graph
    unit = {edge_var(e.id): 1 for e in g.edges}
    return sum(matrix_tree_det(g, [r], unit) for r in range(g.n))


def _yy(i):
    return MultiPoly.var(f"y{i}^0") + MultiPoly.var(f"y{i}^1")


def hypercube_forest_product(k: int) -> MultiPoly:
    z = MultiPoly.var("z")
    return product((z + sum((_yy(i) for i in J), MultiPoly.zero())
                    for r in range(k + 1) for J in itertools.combinations(range(1, k + 1), r)),
                   MultiPoly.one())


def forest_polynomial(named: NamedGraph, root_var: str = "z") -> MultiPoly:
    """All oriented forests, ``root_var`` per root and named edge weights."""
    g = named.graph
    total = MultiPoly.zero()
    for mask in range(1, 1 << g.n):
        roots = [v for v in range(g.n) if mask >> v & 1]
        forests = enumerate_forests(g, roots)
        total = total + MultiPoly.var(root_var, len(roots)) * generating_polynomial(forests, named.weight)
    return total


def hypercube_rooted_formula(k: int, point) -> MultiPoly:
    lead = product((MultiPoly.var(f"y{i + 1}^{point[i]}") for i in range(k)), MultiPoly.one())
    return lead * product((sum((_yy(i) for i in J), MultiPoly.zero())
                           for r in range(2, k + 1) for J in itertools.combinations(range(1, k + 1), r)),
                          MultiPoly.one())


def check_hypercube(k: int) -> list[ExampleCheck]:
    hc = hypercube(k)
    g = hc.graph
    count = hypercube_tree_count(k)
    out = [ExampleCheck(f"hypercube:{k} rooted tree count", count == stanley_count(k),
                        {"matrix_tree": count, "product_formula": stanley_count(k)})]
    bad = []
    for r in range(g.n):
        point = tuple(int(c) for c in g.vertices[r])
        got = generating_polynomial(enumerate_rooted_trees(g, r), hc.weight)
        if got != hypercube_rooted_formula(k, point):
            bad.append(g.vertices[r])
    out.append(ExampleCheck(f"hypercube:{k} rooted tree polynomial", not bad, {"violations": bad}))
    if k <= 2:
        got = forest_polynomial(hc)
        want = hypercube_forest_product(k)
        diff = (got - want).sorted_terms()
        out.append(ExampleCheck(f"hypercube:{k} forest polynomial coefficients", not diff,
                                {"terms": len(got), "differing_terms": len(diff)}))
    return out


# -- tree graph of the (2, 2) bouquet versus the subdivided square ----------------------


def _classify(g: DiGraph, a, k: int):
    """Coordinates of a tree of the (2,...,2) bouquet: ('a', m) / ('b', i, m') / ('c', i, m', j)."""
    choice = {}
    for i in range(1, k + 1):
        e = a.out[g.index(str(i))]
        if e >= 0:
            choice[i] = int(g.vertices[g.edges[e].target].split("^")[1])
    root = g.vertices[a.root]
    if root == "0":
        return ("a", tuple(choice[i] for i in range(1, k + 1)))
    if "^" not in root:
        i = int(root)
        return ("b", i, tuple(choice[j] for j in range(1, k + 1) if j != i))
    i, j = (int(p) for p in root[1:].split("^"))
    return ("c", i, tuple(choice[x] for x in range(1, k + 1) if x != i), j)


def subdivided_cube_edges(k: int) -> list[tuple]:
    """Three vertices inserted on each cube edge, joined by six directed edges."""
    edges = []
    for i in range(1, k + 1):
        for rest in itertools.product((1, 2), repeat=k - 1):
            b = ("b", i, rest)
            for j in (1, 2):
                point = ("a", rest[:i - 1] + (j,) + rest[i - 1:])
                c = ("c", i, rest, j)
                edges += [(point, b), (b, c), (c, point)]
    return sorted(edges)


def check_bouquet_cube(k: int = 2) -> ExampleCheck:
    g = bouquet([2] * k).graph
    tg = build_tree_graph(g)
    image = [_classify(g, a, k) for a in tg.trees]
    mapped = sorted((image[e.source], image[e.target]) for e in tg.edges)
    target = subdivided_cube_edges(k)
    vertices = {v for e in target for v in e}
    ok = len(set(image)) == tg.n and set(image) == vertices and mapped == target
    return ExampleCheck(f"bouquet:{','.join(['2'] * k)} tree graph is the subdivided cube", ok,
                        {"trees": tg.n, "edges": len(tg.edges)})


def check_bouquet_cube_trees(k: int = 2) -> list[ExampleCheck]:
    """Trees of the tree graph rooted at ``a_m`` against the cube's rooted trees."""
    bq = bouquet([2] * k)
    an = Analysis.of(bq.graph)
    g, tg = an.graph, an.tree_graph
    h = tg.as_digraph()
    phi = phi_polynomial(an, "symbolic", bq.weight)
    cube = hypercube(k)
    cg = cube.graph
    subs = {}
    for i in range(1, k + 1):
        s = MultiPoly.var(f"s{i}")
        subs[f"y{i}^0"] = s * MultiPoly.var(f"x{i}^1")
        subs[f"y{i}^1"] = s * MultiPoly.var(f"x{i}^2")
        subs[f"t{i}"] = MultiPoly.var(f"x{i}^1") + MultiPoly.var(f"x{i}^2")
    bad_direct, bad_cube = [], []
    for idx, a in enumerate(tg.trees):
        kind = _classify(g, a, k)
        if kind[0] != "a":
            continue
        m = kind[1]
        trees = enumerate_rooted_trees(h, idx)
        z = generating_polynomial(trees, lambda f: bq.weight(tg.edges[f].label))
        lead = product((MultiPoly.var(f"x{i}^{m[i - 1]}") for i in range(1, k + 1)), MultiPoly.one())
        if z != lead * phi:
            bad_direct.append(list(m))
        root = cg.index("".join(str(c - 1) for c in m))
        zc = MultiPoly.zero()
        for t in enumerate_rooted_trees(cg, root):
            axes = {}
            for e in t.edge_ids:
                i = int(cube.names[e][1:].split("^")[0])
                axes[i] = axes.get(i, 0) + 1
            absent = monomial({f"t{i}": 2 ** (k - 1) - axes.get(i, 0) for i in range(1, k + 1)})
            zc = zc + generating_polynomial([t], cube.weight) * absent
        if z != zc.subs(subs):
            bad_cube.append(list(m))
    return [ExampleCheck(f"bouquet:{','.join(['2'] * k)} trees rooted at a_m", not bad_direct,
                         {"violations": bad_direct}),
            ExampleCheck(f"bouquet:{','.join(['2'] * k)} trees match the cube", not bad_cube,
                         {"violations": bad_cube})]


# -- drivers ---------------------------------------------------------------------------


def family_checks(name: str, seed: int = DEFAULT_SEED) -> list[ExampleCheck]:
    family, args = parse_builtin(name)
    if family == "cycle":
        return check_cycle(args[0]) if args[0] >= 3 else []
    if family == "complete":
        return check_complete(args[0])
    if family == "bouquet":
        out = check_bouquet(args, seed)
        if all(n == 2 for n in args) and len(args) == 2:
            out.append(check_bouquet_cube(2))
            out += check_bouquet_cube_trees(2)
        return out
    return check_hypercube(args[0])


BUILTIN_EXAMPLES = (
    ["cycle:3", "cycle:4", "cycle:5"]
    + [f"complete:{n}" for n in (2, 3, 4, 5)]
    + ["bouquet:1", "bouquet:3", "bouquet:1,2", "bouquet:2,2", "bouquet:3,2",
       "bouquet:2,2,2", "bouquet:1,2,3"]
    + ["hypercube:1", "hypercube:2", "hypercube:3"]
)


def builtin_examples(seed: int = DEFAULT_SEED) -> list[ExampleCheck]:
    out = []
    for name in BUILTIN_EXAMPLES:
        out += family_checks(name, seed)
    return out
