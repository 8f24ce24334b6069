"""Formal group laws, their truncations, and comultiplication structure constants.

A law of dimension e is a tuple of e polynomials in 2e variables; variables
``0..e-1`` are the first argument X and ``e..2e-1`` the second argument Y.

Comultiplication convention: the 2e-variable ring K[w_m, v_m] keeps the
w-block in positions ``0..e-1`` and the v-block in ``e..2e-1``; the coordinate
x^k goes to F(v, w)^k.  Reading off the coefficient of v^i w^j gives the
structure constants with

    D_j o D_i = sum_k c[i, j][k] D_k

for every iterative derivation, matching the worked rules for the
semidirect product (D_(1,0) o D_(0,1) = D_(1,1) + D_(1,0)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Sequence

from .errors import Verdict
from .fields import GF, field as make_field
from .poly import MultiPoly, from_int_terms
from .trunc import Exps, TruncSeries, TruncSpace, index_set, ts_substitute

BUILTINS = ("additive", "multiplicative", "witt2", "ga_semidirect_gm")


@dataclass(frozen=True)
class FormalGroupLaw:
    """e polynomials in 2e variables over a finite field.

    ``max_level`` is None for exact polynomial laws; a number M marks a law
    only claimed to satisfy the axioms modulo level-M truncation.
    """

    name: str
    field: GF
    dim: int
    series: tuple[MultiPoly, ...]
    max_level: int | None = None

    def __post_init__(self):
        if len(self.series) != self.dim:
            raise ValueError(f"need {self.dim} coordinate series, got {len(self.series)}")
        for f in self.series:
            if f.nvars != 2 * self.dim or f.field != self.field:
                raise ValueError("each coordinate must be a polynomial in 2e variables over the law's field")

    @property
    def p(self) -> int:
        return self.field.p

    def evaluate(self, xs: Sequence, ys: Sequence, ring) -> list:
        """F(xs, ys) with arguments in any ring descriptor."""
        args = list(xs) + list(ys)
        return [f.evaluate(args, ring) for f in self.series]

    def format(self) -> str:
        e = self.dim
        if e == 1:
            names = ["X", "Y"]
        else:
            names = [f"X{i + 1}" for i in range(e)] + [f"Y{i + 1}" for i in range(e)]
        return "(" + ", ".join(f.format(names) for f in self.series) + ")"


@dataclass(frozen=True)
class TruncatedGroupLaw:
    """A law modulo p^m-th powers: e truncated series in 2e variables over k."""

    name: str
    field: GF
    dim: int
    level: int
    series: tuple[TruncSeries, ...]

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def space(self) -> TruncSpace:
        return TruncSpace(self.field, self.field.p, self.level, 2 * self.dim)

    def indices(self) -> tuple[Exps, ...]:
        return index_set(self.p, self.level, self.dim)

    @cached_property
    def structure_constants(self) -> "StructureConstants":
        return _extract_constants(self)


@dataclass(frozen=True)
class StructureConstants:
    """Sparse tensor c[(i, j)] -> ((k, c_ij^k), ...) with nonzero entries only."""

    p: int
    level: int
    dim: int
    table: dict

    def entries(self, i: Exps, j: Exps) -> tuple[tuple[Exps, int], ...]:
        return self.table.get((tuple(i), tuple(j)), ())

    def get(self, i: Exps, j: Exps, k: Exps) -> int:
        for kk, c in self.entries(i, j):
            if kk == tuple(k):
                return c
        return 0

    def nonzero(self):
        """(i, j, k, c) for every nonzero constant, in graded-lex (i, j, k) order."""
        idx = index_set(self.p, self.level, self.dim)
        pos = {x: n for n, x in enumerate(idx)}
        out = []
        for (i, j), row in self.table.items():
            for k, c in row:
                out.append((i, j, k, c))
        out.sort(key=lambda r: (pos[r[0]], pos[r[1]], pos[r[2]]))
        return out


# builtins -----------------------------------------------------------------
def _witt_cocycle_terms(p: int):
    """((X+Y)^p - X^p - Y^p)/p as integer terms X^r Y^(p-r), 0 < r < p."""
    return [(r, p - r, comb(p, r) // p) for r in range(1, p)]


def fgl_builtin(name: str, p: int, e: int = 1, n: int = 1) -> FormalGroupLaw:
    """Exact polynomial group laws over F_{p^n}.

    additive (any e), multiplicative X+Y+XY (e=1), witt2 (e=2) with
    W = (X1+Y1, X2+Y2+C(X1,Y1)) for the integral cocycle C, and
    ga_semidirect_gm (e=2) with (X1+Y1+X2*Y1, X2+Y2+X2*Y2).
    """
    F = make_field(p, n)
    if name == "additive":
        if e < 1:
            raise ValueError("dimension must be >= 1")
        series = []
        for t in range(e):
            x = [0] * (2 * e)
            y = [0] * (2 * e)
            x[t] = 1
            y[e + t] = 1
            series.append(from_int_terms(F, 2 * e, [(x, 1), (y, 1)]))
        return FormalGroupLaw(f"additive({e})" if e > 1 else "additive", F, e, tuple(series))
    if name == "multiplicative":
        f = from_int_terms(F, 2, [((1, 0), 1), ((0, 1), 1), ((1, 1), 1)])
        return FormalGroupLaw("multiplicative", F, 1, (f,))
    if name == "witt2":
        f1 = from_int_terms(F, 4, [((1, 0, 0, 0), 1), ((0, 0, 1, 0), 1)])
        terms = [((0, 1, 0, 0), 1), ((0, 0, 0, 1), 1)]
        terms += [((a, 0, b, 0), c) for a, b, c in _witt_cocycle_terms(p)]
        return FormalGroupLaw("witt2", F, 2, (f1, from_int_terms(F, 4, terms)))
    if name == "ga_semidirect_gm":
        f1 = from_int_terms(F, 4, [((1, 0, 0, 0), 1), ((0, 0, 1, 0), 1), ((0, 1, 1, 0), 1)])
        f2 = from_int_terms(F, 4, [((0, 1, 0, 0), 1), ((0, 0, 0, 1), 1), ((0, 1, 0, 1), 1)])
        return FormalGroupLaw("ga_semidirect_gm", F, 2, (f1, f2))
    raise ValueError(f"unknown group law {name!r}; choose from {', '.join(BUILTINS)}")


def builtin_dims(name: str) -> tuple[int, ...]:
    """Dimensions a builtin is defined for (additive: any, reported as 1 and 2)."""
    return {"additive": (1, 2), "multiplicative": (1,), "witt2": (2,), "ga_semidirect_gm": (2,)}[name]


# constructions --------------------------------------------------------------
def fgl_truncate(F, m: int) -> TruncatedGroupLaw:
    if isinstance(F, TruncatedGroupLaw):
        if m > F.level:
            raise ValueError("cannot raise the level of a truncated law")
        from .trunc import ts_truncate

        return TruncatedGroupLaw(F.name, F.field, F.dim, m, tuple(ts_truncate(s, m) for s in F.series))
    if m < 0:
        raise ValueError("level must be non-negative")
    if F.max_level is not None and m > F.max_level:
        raise ValueError(f"law {F.name} is only known modulo level {F.max_level}")
    sp = TruncSpace(F.field, F.p, m, 2 * F.dim)
    return TruncatedGroupLaw(F.name, F.field, F.dim, m, tuple(sp.from_poly(f) for f in F.series))


def fgl_product(F1: FormalGroupLaw, F2: FormalGroupLaw) -> FormalGroupLaw:
    """Block-diagonal product law of dimension e1 + e2."""
    if F1.field != F2.field:
        raise ValueError("laws over different fields")
    e1, e2 = F1.dim, F2.dim
    e = e1 + e2
    pos1 = list(range(e1)) + [e + t for t in range(e1)]
    pos2 = [e1 + t for t in range(e2)] + [e + e1 + t for t in range(e2)]
    series = tuple(f.embed(2 * e, pos1) for f in F1.series) + tuple(f.embed(2 * e, pos2) for f in F2.series)
    lv = [x for x in (F1.max_level, F2.max_level) if x is not None]
    return FormalGroupLaw(f"{F1.name}x{F2.name}", F1.field, e, series, min(lv) if lv else None)


def frobenius_twist(F: FormalGroupLaw, i: int) -> FormalGroupLaw:
    """Apply x -> x^(p^i) to every coefficient."""
    K = F.field
    series = tuple(f.map_coefficients(lambda c: K.frobenius(c, i)) for f in F.series)
    return FormalGroupLaw(F.name if i % K.n == 0 else f"{F.name}^(p^{i})", K, F.dim, series, F.max_level)


# axioms -----------------------------------------------------------------------
def _as_truncated(F, m: int | None) -> TruncatedGroupLaw:
    if isinstance(F, TruncatedGroupLaw):
        return F if m is None or m == F.level else fgl_truncate(F, m)
    if m is None:
        raise ValueError("a level is required for an untruncated law")
    return fgl_truncate(F, m)


def _first_difference(a: TruncSeries, b: TruncSeries):
    d = a - b
    items = d.items()
    return items[0] if items else None


def fgl_check_axioms(F, m: int | None = None) -> Verdict:
    """Unit and associativity axioms modulo level-m truncation.

    The verdict lists every failed axiom and the first failing monomial
    (graded lex over the variables X, Y[, Z]) of the first failure.
    """
    g = _as_truncated(F, m)
    e = g.dim
    p = g.p
    sp2 = TruncSpace(g.field, p, g.level, 2 * e)
    sp3 = TruncSpace(g.field, p, g.level, 3 * e)
    failures: list[str] = []
    witness: dict = {}

    # associativity: F(F(X,Y),Z) = F(X,F(Y,Z))
    X = [sp3.variable(t) for t in range(e)]
    Y = [sp3.variable(e + t) for t in range(e)]
    Z = [sp3.variable(2 * e + t) for t in range(e)]
    XY = [ts_substitute(s, X + Y) for s in g.series]
    YZ = [ts_substitute(s, Y + Z) for s in g.series]
    for t in range(e):
        left = ts_substitute(g.series[t], XY + Z)
        right = ts_substitute(g.series[t], X + YZ)
        diff = _first_difference(left, right)
        if diff is not None:
            failures.append("associativity")
            witness = {"axiom": "associativity", "coordinate": t, "monomial": diff[0], "difference": diff[1]}
            break

    # units: F(X,0) = X and F(0,Y) = Y
    zero = sp2.zero()
    Xs = [sp2.variable(t) for t in range(e)]
    for label, args in (("left unit", Xs + [zero] * e), ("right unit", [zero] * e + Xs)):
        for t in range(e):
            diff = _first_difference(ts_substitute(g.series[t], args), Xs[t])
            if diff is not None:
                failures.append(label)
                if not witness:
                    witness = {"axiom": label, "coordinate": t, "monomial": diff[0], "difference": diff[1]}
                break
    if failures:
        return Verdict.failed(", ".join(failures), failed=tuple(failures), **witness)
    return Verdict.passed(level=g.level)


# structure constants -----------------------------------------------------------
def _monomial_powers(g: TruncatedGroupLaw) -> dict[Exps, TruncSeries]:
    """F(v, w)^k for every k in [p^m]^e, in the (w-block, v-block) layout."""
    e = g.dim
    sp = g.space
    # F(v, w): first argument v (positions e..2e-1), second argument w (0..e-1)
    args = [sp.variable(e + t) for t in range(e)] + [sp.variable(t) for t in range(e)]
    comps = [ts_substitute(s, args) for s in g.series]
    powers: dict[Exps, TruncSeries] = {(0,) * e: sp.one()}
    for k in g.indices():
        if k in powers:
            continue
        t = max(s for s in range(e) if k[s] > 0)
        prev = k[:t] + (k[t] - 1,) + k[t + 1 :]
        powers[k] = powers[prev] * comps[t]
    return powers


def _extract_constants(g: TruncatedGroupLaw) -> StructureConstants:
    e = g.dim
    table: dict[tuple[Exps, Exps], list] = {}
    for k, series in _monomial_powers(g).items():
        for exps, c in series.items():
            j, i = exps[:e], exps[e:]
            table.setdefault((i, j), []).append((k, c))
    idx = index_set(g.p, g.level, e)
    pos = {x: n for n, x in enumerate(idx)}
    frozen = {key: tuple(sorted(row, key=lambda kc: pos[kc[0]])) for key, row in table.items()}
    return StructureConstants(g.p, g.level, e, frozen)


def structure_constants(g) -> StructureConstants:
    """c_{i,j}^k = coefficient of v^i w^j in F(v, w)^k (cached per law)."""
    if isinstance(g, FormalGroupLaw):
        raise TypeError("truncate the law first (fgl_truncate)")
    return g.structure_constants


def comultiplication_map(g: TruncatedGroupLaw, a: TruncSeries) -> TruncSeries:
    """The ring map K[v_m] -> K[w_m, v_m], v^k -> F(v, w)^k.

    Coefficients of ``a`` may lie in any ring; the result lives in the
    2e-variable space over the same ring.
    """
    e = g.dim
    if a.space.nvars != e or a.space.m != g.level or a.space.p != g.p:
        raise ValueError("series does not match the law's level and dimension")
    R = a.space.ring
    target = TruncSpace(R, g.p, g.level, 2 * e)
    powers = _monomial_powers(g)
    result = target.zero()
    for k, c in a.items():
        pk = powers[k]
        result = result + target.from_terms((ex, R.mul(R.from_base(x), c)) for ex, x in pk.items())
    return result


# consistency checks ------------------------------------------------------------------
def check_triangularity(g: TruncatedGroupLaw) -> Verdict:
    """Triangularity and the binomial diagonal over all index triples."""
    sc = structure_constants(g)
    p = g.p
    F = g.field
    idx = g.indices()
    for i in idx:
        for j in idx:
            row = dict(sc.entries(i, j))
            s = sum(i) + sum(j)
            for k, c in row.items():
                if sum(k) > s:
                    return Verdict.failed("degree above |i|+|j|", i=i, j=j, k=k, c=c)
                if sum(k) == s and k != tuple(a + b for a, b in zip(i, j)):
                    return Verdict.failed("off-diagonal top-degree term", i=i, j=j, k=k, c=c)
            ij = tuple(a + b for a, b in zip(i, j))
            expect = 1
            for a, b in zip(i, j):
                expect *= comb(a + b, a)
            expect = F.from_int(expect)
            got = row.get(ij, 0)
            if all(x < p**g.level for x in ij) and got != expect:
                return Verdict.failed("binomial diagonal", i=i, j=j, k=ij, expected=expect, got=got)
    return Verdict.passed()


def check_counit(g: TruncatedGroupLaw) -> Verdict:
    sc = structure_constants(g)
    zero = (0,) * g.dim
    for j in g.indices():
        for a, b in ((zero, j), (j, zero)):
            row = dict(sc.entries(a, b))
            if row != {j: 1}:
                return Verdict.failed("counit", i=a, j=b, row=row)
    return Verdict.passed()


def check_coassociativity(g: TruncatedGroupLaw) -> Verdict:
    """sum_k c_ij^k c_kl^n = sum_k c_jl^k c_ik^n for all i, j, l, n."""
    sc = structure_constants(g)
    F = g.field
    idx = g.indices()
    for i in idx:
        for j in idx:
            for l in idx:
                left: dict = {}
                for k, c in sc.entries(i, j):
                    for n, d in sc.entries(k, l):
                        left[n] = F.add(left.get(n, 0), F.mul(c, d))
                right: dict = {}
                for k, c in sc.entries(j, l):
                    for n, d in sc.entries(i, k):
                        right[n] = F.add(right.get(n, 0), F.mul(c, d))
                left = {n: c for n, c in left.items() if c}
                right = {n: c for n, c in right.items() if c}
                if left != right:
                    return Verdict.failed("coassociativity", i=i, j=j, l=l)
    return Verdict.passed()
