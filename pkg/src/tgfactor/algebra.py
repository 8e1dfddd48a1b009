"""Exact scalars, sparse multivariate polynomials and exact determinants.

Scalars are :class:`fractions.Fraction` (aliased ``Rat``).  Polynomials are
sparse maps from monomials to rational coefficients over named variables
(``x_<edge>``, ``y_<vertex>``, ``z`` and whatever a caller chooses).

Matrices are plain row sequences (``Sequence[Sequence[scalar]]``); the
labelled wrapper lives in :mod:`tgfactor.operators`.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Mapping, Sequence, Union

import flint

from .errors import GuardError

Rat = Fraction
Scalar = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[str, int], ...], sorted by variable name
Assignment = Mapping[str, Scalar]

SYMBOLIC_GUARD = 10
# Below this size the pure-Python elimination is used; above it, FLINT.
BAREISS_CUTOFF = 16


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def var_sort_key(name: str):
    """Natural ordering of variable names: ``x_2`` before ``x_10``."""
    parts = re.split(r"(\d+)", name)
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts)


def _mono_key(m: Monomial):
    # graded lex: total degree first, then variables in natural order
    return (sum(e for _, e in m), tuple((var_sort_key(v), e) for v, e in m))


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Zero coefficients are never stored, so structural equality of the term
    maps is polynomial equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        self._terms: dict[Monomial, Scalar] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    key = tuple(sorted((v, e) for v, e in m if e))
                    self._terms[key] = _norm(self._terms.get(key, 0) + c)
                    if not self._terms[key]:
                        del self._terms[key]

    @classmethod
    def _raw(cls, terms: dict) -> "MultiPoly":
        p = cls.__new__(cls)
        p._terms = terms
        return p

    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        c = _norm(Fraction(c)) if isinstance(c, Fraction) else c
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "MultiPoly":
        return cls._raw({((name, exp),): 1})

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "MultiPoly":
        return cls._raw({(): 1})

    @classmethod
    def univariate(cls, coeffs: Sequence[Scalar], name: str = "z") -> "MultiPoly":
        """Build ``sum(coeffs[i] * name**i)`` (ascending coefficients)."""
        return cls._raw({((name, i),) if i else (): _norm(c)
                         for i, c in enumerate(coeffs) if c})

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def variables(self) -> set[str]:
        return {v for m in self._terms for v, _ in m}

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self._terms), default=-1)

    def constant_value(self) -> Scalar | None:
        """The scalar value if the polynomial is constant, else ``None``."""
        if not self._terms:
            return 0
        if len(self._terms) == 1 and () in self._terms:
            return self._terms[()]
        return None

    def coefficients(self, name: str = "z") -> list:
        """Ascending coefficient list of a univariate polynomial in ``name``."""
        if self.variables() - {name}:
            raise ValueError(f"not univariate in {name!r}: {self.variables()}")
        out = [0] * (max(self.degree_in(name), 0) + 1)
        for m, c in self._terms.items():
            out[dict(m).get(name, 0)] = c
        return out

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: _mono_key(t[0]))

    # -- arithmetic ---------------------------------------------------

    @staticmethod
    def _coerce(other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            self, other = other, self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _norm(s)
            else:
                out.pop(m, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly.zero()
            return MultiPoly._raw({m: _norm(c * other) for m, c in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if len(self._terms) < len(other._terms):
            self, other = other, self
        out: dict = {}
        get = out.get
        for mb, cb in other._terms.items():
            for ma, ca in self._terms.items():
                m = _mono_mul(ma, mb)
                out[m] = get(m, 0) + ca * cb
        return MultiPoly._raw({m: _norm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MultiPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- evaluation ---------------------------------------------------

    def evaluate(self, assignment: Assignment) -> Scalar:
        """Exact value under a total assignment of the variables."""
        total = 0
        cache: dict = {}
        for m, c in self._terms.items():
            term = c
            for v, e in m:
                key = (v, e)
                if key not in cache:
                    try:
                        cache[key] = Fraction(assignment[v]) ** e
                    except KeyError:
                        raise KeyError(f"assignment has no value for {v}") from None
                term = term * cache[key]
            total += term
        return _norm(Fraction(total))

    def subs(self, mapping: Mapping[str, "MultiPoly | Scalar"]) -> "MultiPoly":
        """Substitute polynomials (or scalars) for some variables."""
        out = MultiPoly.zero()
        powers: dict = {}
        for m, c in self._terms.items():
            keep = []
            factor = MultiPoly.const(c)
            for v, e in m:
                if v in mapping:
                    if (v, e) not in powers:
                        powers[(v, e)] = self._coerce(mapping[v]) ** e
                    factor = factor * powers[(v, e)]
                else:
                    keep.append((v, e))
            out = out + factor * MultiPoly._raw({tuple(keep): 1})
        return out

    # -- formatting ---------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        return [{"coeff": str(Fraction(c)), "monomial": {v: e for v, e in m}}
                for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> "MultiPoly":
        terms: dict = {}
        for t in data:
            m = tuple(sorted((v, int(e)) for v, e in t["monomial"].items()))
            terms[m] = terms.get(m, 0) + Fraction(t["coeff"])
        return cls(terms)


def monomial(exponents: Mapping[str, int]) -> MultiPoly:
    return MultiPoly._raw({tuple(sorted((v, e) for v, e in exponents.items() if e)): 1})


def product(items: Iterable, start=None):
    """Multiply an iterable of scalars or polynomials."""
    return reduce(lambda a, b: a * b, items, 1 if start is None else start)


# -- determinants ---------------------------------------------------------


def _to_integer_rows(m: Sequence[Sequence[Scalar]]) -> tuple[list[list[int]], Fraction]:
    """Clear denominators row by row; returns (integer rows, scale) with
    det(m) == det(rows) * scale."""
    rows = []
    scale = Fraction(1)
    for row in m:
        if all(type(a) is int or (type(a) is Fraction and a.denominator == 1) for a in row):
            rows.append([int(a) for a in row])
            continue
        d = lcm(*(Fraction(a).denominator for a in row)) if row else 1
        rows.append([int(Fraction(a) * d) for a in row])
        scale /= d
    return rows, scale


def det_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination over the integers.

    Every division is exact (Sylvester's identity); rows are swapped only
    when a pivot vanishes.
    """
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            if aik:
                for j in range(k + 1, n):
                    ri[j] = (akk * ri[j] - aik * rk[j]) // prev
            else:
                for j in range(k + 1, n):
                    ri[j] = (akk * ri[j]) // prev
            ri[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def det_flint(m: Sequence[Sequence[Scalar]]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    rows, scale = _to_integer_rows(m)
    d = flint.fmpz_mat(rows).det()
    return Fraction(int(d)) * scale


def det_exact(m: Sequence[Sequence[Scalar]]) -> Scalar:
    """Exact determinant of a rational matrix; ``det([]) == 1``."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    if n > BAREISS_CUTOFF:
        return _norm(det_flint(m))
    rows, scale = _to_integer_rows(m)
    return _norm(det_bareiss(rows) * scale)


def det_symbolic(m: Sequence[Sequence], guard: int = SYMBOLIC_GUARD) -> MultiPoly:
    """Exact determinant of a polynomial matrix.

    Laplace expansion along rows, memoized on the set of unused columns; zero
    entries are skipped so sparse operators stay cheap.
    """
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    if n > guard:
        raise GuardError(f"symbolic determinant of dimension {n} > {guard}: use evaluation mode")
    rows = []
    for row in m:
        rows.append([(j, MultiPoly._coerce(a)) for j, a in enumerate(row) if a])
    memo: dict[int, MultiPoly] = {0: MultiPoly.one()}

    def minor(mask: int) -> MultiPoly:
        if mask in memo:
            return memo[mask]
        k = n - mask.bit_count()
        acc = MultiPoly.zero()
        for j, a in rows[k]:
            if mask >> j & 1:
                sub = minor(mask & ~(1 << j))
                if not sub:
                    continue
                term = a * sub
                if (mask & ((1 << j) - 1)).bit_count() & 1:
                    acc = acc - term
                else:
                    acc = acc + term
        memo[mask] = acc
        return acc

    return minor((1 << n) - 1)


def singular_principal_minors(m: Sequence[Sequence[Scalar]]) -> list[Scalar]:
    """All (n-1)-principal minors of a singular rational matrix at once.

    For a matrix ``A`` of rank ``n - 1`` the adjugate has rank one,
    ``adj(A) = c * u v^T`` with ``A u = 0`` and ``v^T A = 0``; its diagonal
    is the list of principal minors.  One minor is computed directly to fix
    ``c``.  Rank below ``n - 1`` gives the zero adjugate.
    """
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        if Fraction(m[0][0]) != 0:
            raise ValueError("matrix is not singular")
        return [1]
    rows, _ = _to_integer_rows(m)
    a = flint.fmpz_mat(rows)
    right, nullity = a.nullspace()
    if nullity == 0:
        raise ValueError("matrix is not singular")
    if nullity > 1:
        return [0] * n
    left, _ = a.transpose().nullspace()
    u = [int(right[i, 0]) for i in range(n)]
    v = [int(left[i, 0]) for i in range(n)]
    r = next((i for i in range(n) if u[i] * v[i] != 0), None)
    if r is None:
        return [0] * n
    keep = [i for i in range(n) if i != r]
    d = Fraction(det_exact([[m[i][j] for j in keep] for i in keep]))
    c = d / (u[r] * v[r])
    return [_norm(c * u[i] * v[i]) for i in range(n)]


# -- characteristic polynomial --------------------------------------------


def _interpolate(xs: Sequence[int], ys: Sequence[Fraction]) -> list[Fraction]:
    """Ascending coefficients of the interpolating polynomial (Newton form)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (z - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[i]
    return poly


def char_poly(m: Sequence[Sequence[Scalar]], name: str = "z") -> MultiPoly:
    """``det(z I - m)`` as a univariate :class:`MultiPoly` in ``name``.

    Small matrices: evaluation at ``n + 1`` integers and interpolation.
    Large ones: FLINT's exact characteristic polynomial.
    """
    n = len(m)
    if n > BAREISS_CUTOFF:
        q = flint.fmpq_mat(n, n, [flint.fmpq(Fraction(a).numerator, Fraction(a).denominator)
                                  for row in m for a in row])
        cp = q.charpoly()
        coeffs = [Fraction(int(c.p), int(c.q)) for c in cp.coeffs()]
        return MultiPoly.univariate(coeffs, name)
    xs = list(range(n + 1))
    ys = []
    for c in xs:
        shifted = [[(c if i == j else 0) - Fraction(m[i][j]) for j in range(n)] for i in range(n)]
        ys.append(Fraction(det_exact(shifted)))
    return MultiPoly.univariate(_interpolate(xs, ys), name)


# -- identity testing -----------------------------------------------------

SAMPLE_RANGE = (1, 2 ** 20)


def random_assignment(variables: Iterable[str], seed: int, trial: int) -> dict[str, Fraction]:
    """Reproducible pseudo-random positive integer values for ``variables``.

    Each value depends only on ``(seed, trial, name)``, so assignments over
    different variable sets agree on their common variables.
    """
    lo, hi = SAMPLE_RANGE
    return {v: Fraction(random.Random(f"{seed}:{trial}:{v}").randint(lo, hi))
            for v in variables}
