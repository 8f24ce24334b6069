"""Truncated polynomial rings R[v_m] = R[v_1..v_e]/(v_1^(p^m), ..., v_e^(p^m)).

Monomials are packed into a single int, ``bits`` bits per variable, with the
field width chosen so that ``2^(bits-1) >= p^m``.  Adding two packed keys then
never carries between fields, and a product monomial is out of range exactly
when ``(k1 + k2 + OFF) & HIGH`` is nonzero, where OFF adds ``2^(bits-1) - p^m``
to every field and HIGH selects the top bit of every field.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import NotAUnitError
from .fields import GF
from .poly import MultiPoly

Exps = tuple[int, ...]


@lru_cache(maxsize=None)
def index_set(p: int, m: int, e: int) -> tuple[Exps, ...]:
    """[p^m]^e in graded lex order: by total degree, then lexicographically."""
    B = p**m
    return tuple(sorted(product(range(B), repeat=e), key=lambda i: (sum(i), i)))


class TruncSpace:
    """The ring R[v_m] in ``nvars`` variables with coefficients in ``ring``."""

    __slots__ = ("ring", "p", "m", "nvars", "bound", "bits", "_mask", "_off", "_high", "_unpack", "_fast")

    def __init__(self, ring, p: int, m: int, nvars: int):
        if m < 0 or nvars < 0:
            raise ValueError("level and arity must be non-negative")
        self.ring, self.p, self.m, self.nvars = ring, p, m, nvars
        self.bound = B = p**m
        self.bits = b = (B - 1).bit_length() + 1
        H = 1 << (b - 1)
        self._mask = (1 << b) - 1
        self._off = sum((H - B) << (b * t) for t in range(nvars))
        self._high = sum(H << (b * t) for t in range(nvars))
        self._unpack: dict[int, Exps] = {}
        # raw prime-field coefficients get an inlined multiply loop
        self._fast = ring.p if isinstance(ring, GF) and ring.n == 1 else 0

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, TruncSpace) and (self.ring, self.p, self.m, self.nvars) == (
            other.ring,
            other.p,
            other.m,
            other.nvars,
        )

    def __hash__(self):
        return hash((self.ring, self.p, self.m, self.nvars))

    def __repr__(self):
        return f"TruncSpace(p={self.p}, m={self.m}, nvars={self.nvars}, ring={self.ring!r})"

    # keys ---------------------------------------------------------------
    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"exponent vector {tuple(exps)} has wrong length for {self.nvars} variables")
        key = 0
        for t, x in enumerate(exps):
            if not 0 <= x < self.bound:
                raise ValueError(f"exponent {x} outside [0, {self.bound})")
            key |= x << (self.bits * t)
        return key

    def unpack(self, key: int) -> Exps:
        e = self._unpack.get(key)
        if e is None:
            b, mask = self.bits, self._mask
            e = tuple((key >> (b * t)) & mask for t in range(self.nvars))
            self._unpack[key] = e
        return e

    def in_range(self, exps: Sequence[int]) -> bool:
        return len(exps) == self.nvars and all(0 <= x < self.bound for x in exps)

    def indices(self) -> tuple[Exps, ...]:
        return index_set(self.p, self.m, self.nvars)

    # constructors -------------------------------------------------------
    def zero(self) -> "TruncSeries":
        return TruncSeries(self, {})

    def one(self) -> "TruncSeries":
        return self.constant(self.ring.one)

    def constant(self, c) -> "TruncSeries":
        return TruncSeries(self, {} if self.ring.is_zero(c) else {0: c})

    def variable(self, i: int) -> "TruncSeries":
        if not 0 <= i < self.nvars:
            raise ValueError("variable index out of range")
        if self.bound == 1:
            return self.zero()
        return TruncSeries(self, {1 << (self.bits * i): self.ring.one})

    def monomial(self, exps: Sequence[int], c=None) -> "TruncSeries":
        c = self.ring.one if c is None else c
        if not self.in_range(exps):
            return self.zero()
        return TruncSeries(self, {} if self.ring.is_zero(c) else {self.pack(exps): c})

    def from_terms(self, terms: Iterable[tuple[Sequence[int], object]]) -> "TruncSeries":
        """Sum of c * v^e, silently dropping exponents out of range."""
        R = self.ring
        out: dict[int, object] = {}
        for e, c in terms:
            if not self.in_range(e):
                continue
            k = self.pack(e)
            out[k] = R.add(out[k], c) if k in out else c
        return TruncSeries(self, {k: c for k, c in out.items() if not R.is_zero(c)})

    def from_poly(self, f: MultiPoly) -> "TruncSeries":
        """Image of a polynomial with coefficients in the base field."""
        if f.nvars != self.nvars:
            raise ValueError("arity mismatch")
        R = self.ring
        return self.from_terms((e, R.from_base(c)) for e, c in f.terms.items())

    def with_ring(self, ring) -> "TruncSpace":
        return TruncSpace(ring, self.p, self.m, self.nvars)

    def with_level(self, m: int) -> "TruncSpace":
        return TruncSpace(self.ring, self.p, m, self.nvars)

    def with_arity(self, nvars: int) -> "TruncSpace":
        return TruncSpace(self.ring, self.p, self.m, nvars)

    # arithmetic ---------------------------------------------------------
    def mul(self, a: "TruncSeries", b: "TruncSeries") -> "TruncSeries":
        ta, tb = a.terms, b.terms
        if not ta or not tb:
            return self.zero()
        off, high = self._off, self._high
        out: dict[int, object] = {}
        if self._fast:
            p = self._fast
            for k1, c1 in ta.items():
                for k2, c2 in tb.items():
                    s = k1 + k2
                    if (s + off) & high:
                        continue
                    out[s] = (out.get(s, 0) + c1 * c2) % p
            return TruncSeries(self, {k: c for k, c in out.items() if c})
        R = self.ring
        add, mul, is_zero = R.add, R.mul, R.is_zero
        for k1, c1 in ta.items():
            for k2, c2 in tb.items():
                s = k1 + k2
                if (s + off) & high:
                    continue
                v = mul(c1, c2)
                out[s] = add(out[s], v) if s in out else v
        return TruncSeries(self, {k: c for k, c in out.items() if not is_zero(c)})


class TruncSeries:
    """An element of a :class:`TruncSpace`: packed key -> nonzero coefficient."""

    __slots__ = ("space", "terms")

    def __init__(self, space: TruncSpace, terms: dict[int, object]):
        self.space = space
        self.terms = terms

    @property
    def ring(self):
        return self.space.ring

    def _check(self, other: "TruncSeries"):
        if not isinstance(other, TruncSeries):
            raise TypeError(f"expected a TruncSeries, got {type(other).__name__}")
        if other.space != self.space:
            raise ValueError(f"mismatched truncated rings: {self.space!r} vs {other.space!r}")

    def _lift(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        R = self.ring
        if isinstance(other, int):
            return self.space.constant(R.from_int(other))
        return self.space.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        R = self.ring
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = R.add(out[k], c)
                if R.is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return TruncSeries(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return TruncSeries(self.space, {k: R.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return self.space.mul(self, other)
        return self.scale(other if not isinstance(other, int) else self.ring.from_int(other))

    __rmul__ = __mul__

    def scale(self, c) -> "TruncSeries":
        R = self.ring
        if R.is_zero(c):
            return self.space.zero()
        out = {}
        for k, x in self.terms.items():
            y = R.mul(x, c)
            if not R.is_zero(y):
                out[k] = y
        return TruncSeries(self.space, out)

    def __pow__(self, k: int):
        if k < 0:
            return ts_invert(self) ** (-k)
        result, base = self.space.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        if other.space != self.space or self.terms.keys() != other.terms.keys():
            return False
        R = self.ring
        return all(R.eq(c, other.terms[k]) for k, c in self.terms.items())

    def __hash__(self):
        return hash((self.space, frozenset(self.terms)))

    def __bool__(self):
        return bool(self.terms)

    # access -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exps: Sequence[int]):
        return ts_coeff(self, exps)

    def constant_term(self):
        return self.terms.get(0, self.ring.zero)

    def items(self) -> list[tuple[Exps, object]]:
        """(exponents, coefficient) pairs in graded lex order."""
        sp = self.space
        pairs = [(sp.unpack(k), c) for k, c in self.terms.items()]
        pairs.sort(key=lambda t: (sum(t[0]), t[0]))
        return pairs

    def support(self) -> list[Exps]:
        return [e for e, _ in self.items()]

    def degree(self) -> int:
        return max((sum(self.space.unpack(k)) for k in self.terms), default=-1)

    def map_coefficients(self, fn, space: TruncSpace | None = None) -> "TruncSeries":
        sp = space or self.space
        R = sp.ring
        out = {}
        for k, c in self.terms.items():
            y = fn(c)
            if not R.is_zero(y):
                out[k] = y
        if space is not None and (space.bits != self.space.bits or space.nvars != self.space.nvars):
            return sp.from_terms((self.space.unpack(k), v) for k, v in out.items())
        return TruncSeries(sp, out)

    def embed(self, space: TruncSpace, positions: Sequence[int]) -> "TruncSeries":
        """Rename variable s to variable positions[s] of a larger space (same ring)."""
        terms = []
        for e, c in self.items():
            ne = [0] * space.nvars
            for s, x in enumerate(e):
                ne[positions[s]] += x
            terms.append((ne, c))
        return space.from_terms(terms)

    def format(self, names: Sequence[str] | None = None, coeff_format=None) -> str:
        sp = self.space
        if names is None:
            names = [f"v{i + 1}" for i in range(sp.nvars)] if sp.nvars > 1 else ["v"]
        if coeff_format is None:
            R = sp.ring
            coeff_format = getattr(R, "format", str)
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x)
            cs = coeff_format(c)
            if not mono:
                parts.append(f"({cs})" if _needs_parens(cs) else cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if _needs_parens(cs) else f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TruncSeries({self.format()})"


def _needs_parens(s: str) -> bool:
    return any(ch in s for ch in "+-/ ")


# module-level operations --------------------------------------------------
def ts_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    a._check(b)
    return a.space.mul(a, b)


def ts_coeff(a: TruncSeries, exps: Sequence[int]):
    sp = a.space
    exps = tuple(exps)
    if not sp.in_range(exps):
        raise ValueError(f"index {exps} outside [{sp.bound}]^{sp.nvars}")
    return a.terms.get(sp.pack(exps), sp.ring.zero)


def ts_truncate(a: TruncSeries, m: int) -> TruncSeries:
    sp = a.space
    if m > sp.m:
        raise ValueError(f"cannot raise the truncation level from {sp.m} to {m}")
    if m == sp.m:
        return a
    target = sp.with_level(m)
    return target.from_terms((e, c) for e, c in a.items() if all(x < target.bound for x in e))


def ts_invert(a: TruncSeries) -> TruncSeries:
    """Inverse of a unit: c(1 - u) with u nilpotent, so 1/a = c^-1 * sum_k u^k."""
    sp = a.space
    R = sp.ring
    c = a.constant_term()
    if R.is_zero(c):
        raise NotAUnitError("constant term is zero")
    try:
        ci = R.inv(c)
    except (NotAUnitError, ZeroDivisionError) as exc:
        raise NotAUnitError(f"constant term is not a unit: {exc}") from None
    u = sp.one() - a.scale(ci)
    result, term = sp.one(), sp.one()
    # u^(p^m) = 0; the loop stops at the first vanishing power.
    for _ in range(sp.nvars * (sp.bound - 1) + 1):
        term = term * u
        if term.is_zero():
            break
        result = result + term
    return result.scale(ci)


def ts_substitute(f, args: Sequence[TruncSeries]) -> TruncSeries:
    """Compose f with the series ``args`` (one per variable of f).

    f is a :class:`MultiPoly` over the base field, or a :class:`TruncSeries`
    whose coefficients live in the ring of ``args``.
    """
    if not args:
        raise ValueError("need at least one argument")
    sp = args[0].space
    for a in args:
        if a.space != sp:
            raise ValueError("arguments live in different truncated rings")
    R = sp.ring
    if isinstance(f, MultiPoly):
        if f.nvars != len(args):
            raise ValueError(f"expected {f.nvars} arguments, got {len(args)}")
        terms = [(e, R.from_base(c)) for e, c in f.terms.items()]
    elif isinstance(f, TruncSeries):
        if f.space.nvars != len(args):
            raise ValueError(f"expected {f.space.nvars} arguments, got {len(args)}")
        if f.space.ring != R:
            raise ValueError("coefficient ring of f differs from that of the arguments")
        terms = f.items()
    else:
        raise TypeError(f"cannot substitute into {type(f).__name__}")
    cache: dict[tuple[int, int], TruncSeries] = {}

    def power(i: int, k: int) -> TruncSeries:
        if (i, k) not in cache:
            cache[(i, k)] = args[i] if k == 1 else power(i, k - 1) * args[i]
        return cache[(i, k)]

    result = sp.zero()
    for e, c in terms:
        t = sp.constant(c)
        for i, k in enumerate(e):
            if k:
                t = t * power(i, k)
                if t.is_zero():
                    break
        result = result + t
    return result
