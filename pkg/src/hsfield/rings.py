"""Coefficient-ring descriptors sharing one small interface.

Every descriptor (and :class:`~hsfield.fields.GF` itself) offers ``zero``,
``one``, ``add``, ``sub``, ``neg``, ``mul``, ``pow``, ``is_zero``, ``eq``,
``from_base``, ``from_int`` and ``inv``.  Truncated series and linear algebra
are written against this interface only, so the same code handles constants
in F_q, polynomials, rational functions and truncated power series.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NotAUnitError
from .fields import GF
from .poly import MultiPoly
from .ratfunc import RationalFunction


def default_names(nvars: int, stem: str = "t") -> tuple[str, ...]:
    if nvars == 1:
        return (stem,)
    return tuple(f"{stem}{i + 1}" for i in range(nvars))


@dataclass(frozen=True)
class PolyRing:
    """F_q[t_1..t_r]; only nonzero constants are units."""

    field: GF
    nvars: int
    names: tuple[str, ...] = ()

    kind = "polynomial"

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", default_names(self.nvars))
        if len(self.names) != self.nvars:
            raise ValueError("one name per variable")

    @property
    def zero(self) -> MultiPoly:
        return MultiPoly.zero(self.field, self.nvars)

    @property
    def one(self) -> MultiPoly:
        return MultiPoly.one(self.field, self.nvars)

    def gen(self, i: int) -> MultiPoly:
        return MultiPoly.variable(self.field, self.nvars, i)

    def gens(self) -> list[MultiPoly]:
        return [self.gen(i) for i in range(self.nvars)]

    def from_base(self, c: int) -> MultiPoly:
        return MultiPoly.constant(self.field, self.nvars, c)

    def from_int(self, k: int) -> MultiPoly:
        return self.from_base(self.field.from_int(k))

    def coerce(self, x) -> MultiPoly:
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, RationalFunction):
            if not x.is_polynomial():
                raise ValueError(f"{x!r} is not a polynomial")
            return x.num
        return x

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        return a**k

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def eq(self, a, b) -> bool:
        return a == b

    def inv(self, a):
        if not a.is_constant() or a.is_zero():
            raise NotAUnitError(f"{a.format(self.names)} is not a unit in the polynomial ring")
        return self.from_base(self.field.inv(a.constant_term()))

    def div(self, a, b):
        return a * self.inv(b)

    def map_coefficients(self, a, fn):
        return a.map_coefficients(fn)

    def format(self, a) -> str:
        return a.format(self.names)


@dataclass(frozen=True)
class FractionField:
    """F_q(t_1..t_r) with elements :class:`RationalFunction`."""

    field: GF
    nvars: int
    names: tuple[str, ...] = ()

    kind = "rational"

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", default_names(self.nvars))
        if len(self.names) != self.nvars:
            raise ValueError("one name per variable")

    @property
    def zero(self) -> RationalFunction:
        return RationalFunction.constant(self.field, self.nvars, 0)

    @property
    def one(self) -> RationalFunction:
        return RationalFunction.constant(self.field, self.nvars, 1)

    def gen(self, i: int) -> RationalFunction:
        return RationalFunction.variable(self.field, self.nvars, i)

    def gens(self) -> list[RationalFunction]:
        return [self.gen(i) for i in range(self.nvars)]

    def from_base(self, c: int) -> RationalFunction:
        return RationalFunction.constant(self.field, self.nvars, c)

    def from_int(self, k: int) -> RationalFunction:
        return self.from_base(self.field.from_int(k))

    def coerce(self, x) -> RationalFunction:
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, MultiPoly):
            return RationalFunction.from_poly(x)
        return x

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, k: int):
        return a**k

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def eq(self, a, b) -> bool:
        return a == b

    def inv(self, a):
        if a.is_zero():
            raise NotAUnitError("0 is not invertible")
        return a.inverse()

    def div(self, a, b):
        return a * self.inv(b)

    def map_coefficients(self, a, fn):
        return a.map_coefficients(fn)

    def format(self, a) -> str:
        return a.format(self.names)


@dataclass(frozen=True)
class SeriesRing:
    """F_q[[X_1..X_e]] modulo terms of total degree >= precision.

    Elements are :class:`MultiPoly` values with every term of degree below
    ``precision``.  Results are exact modulo that ideal.
    """

    field: GF
    nvars: int
    precision: int
    names: tuple[str, ...] = ()

    kind = "series"

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", default_names(self.nvars, "X"))
        if len(self.names) != self.nvars:
            raise ValueError("one name per variable")
        if self.precision < 1:
            raise ValueError("precision must be positive")

    @property
    def zero(self) -> MultiPoly:
        return MultiPoly.zero(self.field, self.nvars)

    @property
    def one(self) -> MultiPoly:
        return MultiPoly.one(self.field, self.nvars)

    def gen(self, i: int) -> MultiPoly:
        return self.truncate(MultiPoly.variable(self.field, self.nvars, i))

    def gens(self) -> list[MultiPoly]:
        return [self.gen(i) for i in range(self.nvars)]

    def truncate(self, a: MultiPoly) -> MultiPoly:
        if a.degree() < self.precision:
            return a
        return a.truncate_degree(self.precision)

    def from_base(self, c: int) -> MultiPoly:
        return MultiPoly.constant(self.field, self.nvars, c)

    def from_int(self, k: int) -> MultiPoly:
        return self.from_base(self.field.from_int(k))

    def coerce(self, x) -> MultiPoly:
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, RationalFunction):
            if not x.is_polynomial():
                raise ValueError("only polynomial elements embed into the series ring directly")
            x = x.num
        return self.truncate(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        N = self.precision
        F = self.field
        out: dict = {}
        for ea, ca in a.terms.items():
            da = sum(ea)
            if da >= N:
                continue
            for eb, cb in b.terms.items():
                if da + sum(eb) >= N:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
        return MultiPoly(F, self.nvars, out)

    def pow(self, a, k: int):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def eq(self, a, b) -> bool:
        return a == b

    def inv(self, a):
        c = a.constant_term()
        if c == 0:
            raise NotAUnitError("series with zero constant term is not a unit")
        # a = c(1 - u) with u of positive order; 1/a = c^-1 * sum u^k.
        ci = self.field.inv(c)
        u = self.from_base(1) - a.scale(ci)
        result, term = self.one, self.one
        for _ in range(self.precision):
            term = self.mul(term, u)
            if term.is_zero():
                break
            result = result + term
        return result.scale(ci)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def map_coefficients(self, a, fn):
        return a.map_coefficients(fn)

    def format(self, a) -> str:
        return a.format(self.names)


def ring_for(kind: str, field: GF, names: Sequence[str], precision: int | None = None):
    """Build the descriptor for a context kind: polynomial, rational or series."""
    names = tuple(names)
    if kind == "polynomial":
        return PolyRing(field, len(names), names)
    if kind == "rational":
        return FractionField(field, len(names), names)
    if kind == "series":
        if precision is None:
            raise ValueError("series contexts need a precision")
        return SeriesRing(field, len(names), precision, names)
    raise ValueError(f"unknown ring kind {kind!r}")
