"""Laplacian, Schrodinger and adjacency operators on ``G`` and on its tree graph.

Conventions: ``Q[v][w] = x_e`` for an edge ``e = v -> w``, ``Q[v][v]`` is minus
the total out-weight of ``v``; ``L = Q + diag(y)``; the adjacency operator
``M`` is ``L`` with ``y_v`` replaced by the out-weight of ``v``.  On the tree
graph the edge weight is ``x`` of the projected edge and the potential of a
tree is ``y`` of its root.

``mode`` is ``"symbolic"`` (entries are :class:`MultiPoly`) or an assignment
mapping variable names to rationals (entries are exact scalars).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence, Union

from .algebra import MultiPoly, Scalar, det_exact, det_symbolic
from .digraph import DiGraph
from .errors import GraphError, GuardError
from .spanning import edge_var, vertex_var
from .treegraph import TreeGraph

LIFT_GUARD = 2000

Mode = Union[str, Mapping[str, Scalar]]


class OperatorKind(enum.Enum):
    LAPLACIAN = "Q"
    SCHRODINGER = "L"
    ADJACENCY = "M"


@dataclass(frozen=True)
class LabeledMatrix:
    labels: tuple
    rows: tuple  # tuple of row tuples

    @property
    def n(self) -> int:
        return len(self.labels)

    def entry(self, a: Hashable, b: Hashable):
        return self.rows[self.labels.index(a)][self.labels.index(b)]

    def det(self):
        """Exact determinant (symbolic when entries are polynomials)."""
        if any(isinstance(x, MultiPoly) for row in self.rows for x in row):
            return det_symbolic(self.rows)
        return det_exact(self.rows)

    def negated(self) -> "LabeledMatrix":
        return LabeledMatrix(self.labels, tuple(tuple(-x for x in row) for row in self.rows))

    def evaluate(self, assignment: Mapping[str, Scalar]) -> "LabeledMatrix":
        return LabeledMatrix(self.labels, tuple(
            tuple(x.evaluate(assignment) if isinstance(x, MultiPoly) else x for x in row)
            for row in self.rows))

    def to_json(self) -> dict:
        return {"labels": [str(l) for l in self.labels],
                "rows": [[str(x) for x in row] for row in self.rows]}


def _is_symbolic(mode: Mode) -> bool:
    if isinstance(mode, str):
        if mode != "symbolic":
            raise ValueError(f"unknown mode {mode!r}")
        return True
    return False


def edge_weights(g: DiGraph, mode: Mode) -> list:
    if _is_symbolic(mode):
        return [MultiPoly.var(edge_var(e.id)) for e in g.edges]
    return [Fraction(mode[edge_var(e.id)]) for e in g.edges]


def out_weights(g: DiGraph, weights: Sequence) -> list:
    zero = MultiPoly.zero() if weights and isinstance(weights[0], MultiPoly) else 0
    sums = [zero] * g.n
    for e in g.edges:
        sums[e.source] = sums[e.source] + weights[e.id]
    return sums


def potentials(g: DiGraph, kind: OperatorKind, mode: Mode, weights: Sequence) -> list:
    """Diagonal potential ``y_v`` per vertex, after the adjacency substitution."""
    if kind is OperatorKind.LAPLACIAN:
        return [0] * g.n
    if kind is OperatorKind.ADJACENCY:
        return adjacency_substitution(g, mode, weights)
    if _is_symbolic(mode):
        return [MultiPoly.var(vertex_var(v)) for v in range(g.n)]
    return [Fraction(mode[vertex_var(v)]) for v in range(g.n)]


def adjacency_substitution(g: DiGraph, mode: Mode, weights: Sequence | None = None) -> list:
    """Values substituted for ``y_v`` to turn ``L`` into the adjacency operator."""
    if weights is None:
        weights = edge_weights(g, mode)
    return out_weights(g, weights)


def build_operator(g: DiGraph, kind: OperatorKind, mode: Mode = "symbolic") -> LabeledMatrix:
    weights = edge_weights(g, mode)
    symbolic = _is_symbolic(mode)
    zero = MultiPoly.zero() if symbolic else 0
    rows = [[zero] * g.n for _ in range(g.n)]
    for e in g.edges:
        rows[e.source][e.target] = weights[e.id]
    sums = out_weights(g, weights)
    pots = potentials(g, kind, mode, weights)
    for v in range(g.n):
        rows[v][v] = pots[v] - sums[v]
    return LabeledMatrix(tuple(range(g.n)), tuple(tuple(r) for r in rows))


def restrict(m: LabeledMatrix, keep: Iterable[Hashable]) -> LabeledMatrix:
    """Principal submatrix on ``keep`` (label order of ``m`` preserved)."""
    keep = set(keep)
    missing = keep - set(m.labels)
    if missing:
        raise GraphError(f"labels not present: {sorted(missing, key=str)}")
    idx = [i for i, l in enumerate(m.labels) if l in keep]
    return LabeledMatrix(tuple(m.labels[i] for i in idx),
                         tuple(tuple(m.rows[i][j] for j in idx) for i in idx))


def delete(m: LabeledMatrix, drop: Iterable[Hashable]) -> LabeledMatrix:
    """Principal submatrix with the rows and columns of ``drop`` removed."""
    drop = set(drop)
    missing = drop - set(m.labels)
    if missing:
        raise GraphError(f"labels not present: {sorted(missing, key=str)}")
    return restrict(m, [l for l in m.labels if l not in drop])


def build_lifted_operator(tg: TreeGraph, kind: OperatorKind, mode: Mode = "symbolic",
                          guard: int = LIFT_GUARD) -> LabeledMatrix:
    """Operator on the tree graph with weights pulled back along the projection."""
    if tg.n > guard:
        raise GuardError(f"lifted operator of dimension {tg.n} > {guard}")
    g = tg.base
    weights = edge_weights(g, mode)
    symbolic = _is_symbolic(mode)
    zero = MultiPoly.zero() if symbolic else 0
    pots = potentials(g, kind, mode, weights)
    rows = [[zero] * tg.n for _ in range(tg.n)]
    for e in tg.edges:
        rows[e.source][e.target] = rows[e.source][e.target] + weights[e.label]
    for i in range(tg.n):
        out = sum((weights[tg.edges[f].label] for f in tg.out_edges[i]), zero)
        rows[i][i] = pots[tg.root(i)] - out
    return LabeledMatrix(tuple(range(tg.n)), tuple(tuple(r) for r in rows))


def matrix_tree_det(g: DiGraph, rooted_in: Iterable[int], assignment: Mode) -> Scalar | MultiPoly:
    """``det((-Q)^W)``: the forest sum over forests rooted in ``W``."""
    w = set(rooted_in)
    if not w:
        raise GraphError("rooted_in must be nonempty")
    q = build_operator(g, OperatorKind.LAPLACIAN, assignment).negated()
    return delete(q, w).det()


def schrodinger_minor(g: DiGraph, w: Iterable[int], mode: Mode):
    """``det(L_W)``: determinant of the Schrodinger operator restricted to ``W``."""
    return restrict(build_operator(g, OperatorKind.SCHRODINGER, mode), w).det()


def operator_variables(g: DiGraph) -> list[str]:
    return [edge_var(e.id) for e in g.edges] + [vertex_var(v) for v in range(g.n)]


def left_apply(measure: Sequence, m: LabeledMatrix) -> list:
    """Row vector times matrix: ``(mu m)(w) = sum_v mu(v) m[v][w]``."""
    n = m.n
    out = [0] * n
    for v in range(n):
        mv = measure[v]
        if not mv:
            continue
        row = m.rows[v]
        for w in range(n):
            if row[w]:
                out[w] = out[w] + mv * row[w]
    return out
