"""Sparse multivariate polynomials over a finite field.

A :class:`MultiPoly` maps exponent tuples to nonzero raw field elements.
Values are treated as immutable once built.
"""

from __future__ import annotations

import heapq
from typing import Callable, Iterable, Sequence

from .fields import GF

Exps = tuple[int, ...]


def _grlex(e: Exps):
    return (sum(e), e)


def _grevlex(e: Exps):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex(e: Exps):
    return e


ORDERS: dict[str, Callable[[Exps], object]] = {"grlex": _grlex, "lex": _lex, "grevlex": _grevlex}
DEFAULT_ORDER = "grlex"


def order_key(order: str | Callable = DEFAULT_ORDER) -> Callable[[Exps], object]:
    if callable(order):
        return order
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}; choose from {sorted(ORDERS)}") from None


def _max_exps(terms, nvars: int) -> list[int]:
    m = [0] * nvars
    for e in terms:
        for i, x in enumerate(e):
            if x > m[i]:
                m[i] = x
    return m


def _shifts(degs: Sequence[int], guard: bool) -> tuple[tuple[int, int], ...]:
    """Bit offset and width per variable; variable 0 is most significant, so
    integer order of packed keys is lex order.  A guard bit per field allows
    borrow-free divisibility tests."""
    out = []
    pos = 0
    for d in reversed(degs):
        w = max(d, 1).bit_length() + (1 if guard else 0)
        out.append((pos, w))
        pos += w
    return tuple(reversed(out))


def _pack(e: Exps, shifts) -> int:
    k = 0
    for x, (pos, _) in zip(e, shifts):
        k |= x << pos
    return k


def _unpack(k: int, shifts) -> Exps:
    return tuple((k >> pos) & ((1 << w) - 1) for pos, w in shifts)


class MultiPoly:
    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: GF, nvars: int, terms: dict[Exps, int] | None = None):
        self.field = field
        self.nvars = nvars
        self.terms = {} if terms is None else {e: c for e, c in terms.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, field: GF, nvars: int, terms: dict[Exps, int]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.field, obj.nvars, obj.terms, obj._hash = field, nvars, terms, None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field: GF, nvars: int) -> "MultiPoly":
        return cls._raw(field, nvars, {})

    @classmethod
    def constant(cls, field: GF, nvars: int, c: int) -> "MultiPoly":
        return cls._raw(field, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, field: GF, nvars: int) -> "MultiPoly":
        return cls.constant(field, nvars, 1)

    @classmethod
    def variable(cls, field: GF, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(field, nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, field: GF, exps: Sequence[int], c: int = 1) -> "MultiPoly":
        exps = tuple(exps)
        return cls._raw(field, len(exps), {exps: c} if c else {})

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.field != self.field or other.nvars != self.nvars:
                raise ValueError("polynomials over different rings")
            return other
        if isinstance(other, int):
            return MultiPoly.constant(self.field, self.nvars, self.field.from_int(other))
        return NotImplemented

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * self.nvars) == 1

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def coeff(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> set[int]:
        out = set()
        for e in self.terms:
            out.update(i for i, x in enumerate(e) if x)
        return out

    def sorted_terms(self, order=DEFAULT_ORDER, reverse: bool = True) -> list[tuple[Exps, int]]:
        key = order_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=reverse)

    def leading_term(self, order=DEFAULT_ORDER) -> tuple[Exps, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order_key(order)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def leading_coeff(self, order=DEFAULT_ORDER) -> int:
        return self.leading_term(order)[1]

    def monic(self, order=DEFAULT_ORDER) -> "MultiPoly":
        if not self.terms:
            return self
        lc = self.leading_coeff(order)
        return self if lc == 1 else self.scale(self.field.inv(lc))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(F, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return MultiPoly._raw(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "MultiPoly":
        if c == 0:
            return MultiPoly.zero(self.field, self.nvars)
        if c == 1:
            return self
        F = self.field
        return MultiPoly._raw(F, self.nvars, {e: F.mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly._raw(F, self.nvars, {})
        if len(a) < len(b):
            a, b = b, a
        degs = [x + y for x, y in zip(_max_exps(a, self.nvars), _max_exps(b, self.nvars))]
        shifts = _shifts(degs, guard=False)
        pa = {_pack(e, shifts): c for e, c in a.items()}
        pb = {_pack(e, shifts): c for e, c in b.items()}
        out: dict[int, int] = {}
        if F.n == 1:
            p = F.p
            for kb, cb in pb.items():
                for ka, ca in pa.items():
                    k = ka + kb
                    out[k] = (out.get(k, 0) + ca * cb) % p
        else:
            add, mul = F.add, F.mul
            for kb, cb in pb.items():
                for ka, ca in pa.items():
                    k = ka + kb
                    out[k] = add(out.get(k, 0), mul(ca, cb))
        return MultiPoly._raw(F, self.nvars, {_unpack(k, shifts): c for k, c in out.items() if c})

    __rmul__ = __mul__

    def mul_term(self, exps: Exps, c: int) -> "MultiPoly":
        F = self.field
        if c == 0:
            return MultiPoly.zero(F, self.nvars)
        return MultiPoly._raw(
            F, self.nvars, {tuple(x + y for x, y in zip(e, exps)): F.mul(v, c) for e, v in self.terms.items()}
        )

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.one(self.field, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius_power(self) -> "MultiPoly":
        """f^p computed termwise (Frobenius is additive in characteristic p)."""
        F = self.field
        p = F.p
        return MultiPoly._raw(F, self.nvars, {tuple(x * p for x in e): F.pow(c, p) for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # maps ---------------------------------------------------------------
    def map_coefficients(self, fn: Callable[[int], int], field: GF | None = None) -> "MultiPoly":
        return MultiPoly(field or self.field, self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def with_field(self, field: GF) -> "MultiPoly":
        """Reinterpret prime-subfield coefficients in a field of the same characteristic."""
        if field == self.field:
            return self
        if field.p != self.field.p or self.field.n != 1:
            raise ValueError("only prime-field coefficients can be moved to another field")
        return MultiPoly._raw(field, self.nvars, dict(self.terms))

    def embed(self, nvars: int, positions: Sequence[int]) -> "MultiPoly":
        """Rename variable s to variable positions[s] in an nvars-variable ring."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for s, x in enumerate(e):
                if x:
                    ne[positions[s]] += x
            out[tuple(ne)] = c
        return MultiPoly._raw(self.field, nvars, out)

    def derivative(self, i: int) -> "MultiPoly":
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = F.mul(F.from_int(e[i]), c)
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = v
        return MultiPoly._raw(F, self.nvars, out)

    def truncate_degree(self, n: int) -> "MultiPoly":
        """Drop terms of total degree >= n."""
        return MultiPoly._raw(self.field, self.nvars, {e: c for e, c in self.terms.items() if sum(e) < n})

    def evaluate(self, values: Sequence, ring=None):
        """Evaluate at ``values``.

        Without ``ring`` the values are raw elements of ``self.field`` (or of a
        field containing it as prime subfield).  With ``ring`` they are elements
        of that ring and coefficients are embedded through ``ring.from_base``.
        """
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        R = ring if ring is not None else self.field
        cache: dict[tuple[int, int], object] = {}
        total = R.zero
        for e, c in self.terms.items():
            t = R.from_base(c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = R.pow(values[i], k)
                    t = R.mul(t, cache[(i, k)])
            total = R.add(total, t)
        return total

    def substitute(self, values: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose with polynomials ``values`` (one per variable, common ring)."""
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} substitutions, got {len(values)}")
        if not values:
            return self
        target = values[0]
        result = MultiPoly.zero(target.field, target.nvars)
        cache: dict[tuple[int, int], MultiPoly] = {}
        for e, c in self.terms.items():
            t = MultiPoly.constant(target.field, target.nvars, c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = values[i] ** k
                    t = t * cache[(i, k)]
            result = result + t
        return result

    # display ------------------------------------------------------------
    def format(self, names: Sequence[str] | None = None, order=DEFAULT_ORDER) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            cs = self.field.format(c)
            if not factors:
                parts.append(cs)
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([cs] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.format()})"


def monomials_up_to(nvars: int, d: int) -> list[Exps]:
    """All exponent vectors of total degree <= d, sorted by graded lex."""
    out: list[Exps] = []

    def rec(prefix, remaining, left):
        if left == 0:
            out.append(tuple(prefix))
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, left - 1)

    rec([], d, nvars)
    return sorted(out, key=_grlex)


# division ---------------------------------------------------------------
def poly_divmod(f: MultiPoly, divisors: Sequence[MultiPoly], order=DEFAULT_ORDER):
    """Multivariate division: ``f = sum(q_i * g_i) + r``.

    No term of ``r`` is divisible by a leading term of any divisor.
    """
    if not divisors:
        raise ValueError("empty divisor list")
    if any(g.is_zero() for g in divisors):
        raise ZeroDivisionError("division by the zero polynomial")
    F = f.field
    key = order_key(order)
    leads = [g.leading_term(key) for g in divisors]
    lead_inv = [F.inv(c) for _, c in leads]
    quotients = [dict() for _ in divisors]
    rem: dict[Exps, int] = {}
    p = dict(f.terms)
    while p:
        e = max(p, key=key)
        c = p[e]
        for idx, (le, _) in enumerate(leads):
            if all(x >= y for x, y in zip(e, le)):
                shift = tuple(x - y for x, y in zip(e, le))
                factor = F.mul(c, lead_inv[idx])
                quotients[idx][shift] = F.add(quotients[idx].get(shift, 0), factor)
                for ge, gc in divisors[idx].terms.items():
                    te = tuple(x + y for x, y in zip(ge, shift))
                    v = F.sub(p.get(te, 0), F.mul(factor, gc))
                    if v:
                        p[te] = v
                    else:
                        p.pop(te, None)
                break
        else:
            rem[e] = c
            del p[e]
    qs = [MultiPoly(F, f.nvars, q) for q in quotients]
    return qs, MultiPoly(F, f.nvars, rem)


def exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """a / b when b divides a (ArithmeticError otherwise).

    Lex-order division on packed exponents: for an exact quotient every
    intermediate term has degree at most deg(a) + deg(b) in each variable.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    F = a.field
    if a.is_zero():
        return MultiPoly.zero(F, a.nvars)
    degs = [x + y for x, y in zip(_max_exps(a.terms, a.nvars), _max_exps(b.terms, b.nvars))]
    shifts = _shifts(degs, guard=True)
    guard = 0
    for pos, w in shifts:
        guard |= 1 << (pos + w - 1)
    rem = {_pack(e, shifts): c for e, c in a.terms.items()}
    div = [(_pack(e, shifts), c) for e, c in b.terms.items()]
    lk, lc = max(div)
    linv = F.inv(lc)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    q: dict[int, int] = {}
    prime = F.n == 1
    p = F.p
    while heap:
        k = -heapq.heappop(heap)
        c = rem.pop(k, 0)
        if not c:
            continue
        diff = (k | guard) - lk
        if diff & guard != guard:
            raise ArithmeticError("division is not exact")
        shift = diff & ~guard
        f = (c * linv) % p if prime else F.mul(c, linv)
        q[shift] = f
        for dk, dc in div:
            if dk == lk:
                continue
            t = dk + shift
            if t & guard:
                # exceeds the degree bound of any exact quotient
                raise ArithmeticError("division is not exact")
            old = rem.get(t, 0)
            v = (old - f * dc) % p if prime else F.sub(old, F.mul(f, dc))
            if v:
                if t not in rem:
                    heapq.heappush(heap, -t)
                rem[t] = v
            else:
                rem.pop(t, None)
    return MultiPoly._raw(F, a.nvars, {_unpack(k, shifts): c for k, c in q.items()})


# gcd --------------------------------------------------------------------
def _coeffs_in(a: MultiPoly, i: int) -> dict[int, MultiPoly]:
    parts: dict[int, dict[Exps, int]] = {}
    for e, c in a.terms.items():
        k = e[i]
        ne = e[:i] + (0,) + e[i + 1 :]
        parts.setdefault(k, {})[ne] = c
    return {k: MultiPoly._raw(a.field, a.nvars, t) for k, t in parts.items()}


def _content(a: MultiPoly, i: int) -> MultiPoly:
    g = None
    for c in sorted(_coeffs_in(a, i).values(), key=lambda q: len(q.terms)):
        g = c.monic() if g is None else poly_gcd(g, c)
        if g.is_constant():
            return MultiPoly.one(a.field, a.nvars)
    return g


def _primitive_part(a: MultiPoly, i: int) -> MultiPoly:
    c = _content(a, i)
    return a if c.is_one() else exact_div(a, c)


def _prem(a: MultiPoly, b: MultiPoly, i: int) -> MultiPoly:
    db = b.degree_in(i)
    bc = _coeffs_in(b, i)
    lc = bc[db]
    rest = b - lc.mul_term(tuple(db if s == i else 0 for s in range(b.nvars)), 1)
    r = a
    while not r.is_zero() and r.degree_in(i) >= db:
        dr = r.degree_in(i)
        lr = _coeffs_in(r, i)[dr]
        shift = tuple(dr - db if s == i else 0 for s in range(a.nvars))
        # lc*r - lr*x^shift*b; the top-degree parts cancel exactly.
        top = lr.mul_term(tuple(dr if s == i else 0 for s in range(a.nvars)), 1)
        r = lc * (r - top) - (lr * rest).mul_term(shift, 1)
    return r


def _univariate_gcd(a: MultiPoly, b: MultiPoly, order) -> MultiPoly:
    while not b.is_zero():
        _, r = poly_divmod(a, [b], order)
        a, b = b, r
    return a.monic()


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic (under grlex) greatest common divisor; gcd(0, 0) = 0."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return MultiPoly.one(a.field, a.nvars)
    va, vb = a.variables(), b.variables()
    x = max(va | vb)
    if x not in va:
        return poly_gcd(a, _content(b, x))
    if x not in vb:
        return poly_gcd(_content(a, x), b)
    if va == vb == {x}:
        return _univariate_gcd(a, b, "lex")
    ca, cb = _content(a, x), _content(b, x)
    pa = a if ca.is_one() else exact_div(a, ca)
    pb = b if cb.is_one() else exact_div(b, cb)
    if pa.degree_in(x) < pb.degree_in(x):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, x)
        if r.is_zero():
            g = _primitive_part(pb, x)
            break
        if r.degree_in(x) == 0:
            g = MultiPoly.one(a.field, a.nvars)
            break
        pa, pb = pb, _primitive_part(r, x)
    return (poly_gcd(ca, cb) * g).monic()


def lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return exact_div(a * b, poly_gcd(a, b)).monic()


def from_int_terms(field: GF, nvars: int, terms: Iterable[tuple[Sequence[int], int]]) -> MultiPoly:
    """Build a polynomial from (exponents, integer coefficient) pairs, reducing mod p."""
    out: dict[Exps, int] = {}
    for e, c in terms:
        e = tuple(e)
        out[e] = field.add(out.get(e, 0), field.from_int(c))
    return MultiPoly(field, nvars, out)
