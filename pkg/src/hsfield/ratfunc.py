"""Rational functions over F_q and the p-th root function.

A :class:`RationalFunction` is always stored reduced: gcd(num, den) = 1 and the
denominator monic under graded lex, which makes equality structural.
"""

from __future__ import annotations

from typing import Sequence

from .fields import GF, FieldElement
from .poly import MultiPoly, exact_div, poly_gcd


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.one(num.field, num.nvars)
        if den.field != num.field or den.nvars != num.nvars:
            raise ValueError("numerator and denominator live in different rings")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = MultiPoly.one(num.field, num.nvars)
        elif not den.is_one():
            if not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_one():
                    num, den = exact_div(num, g), exact_div(den, g)
            lc = den.leading_coeff()
            if lc != 1:
                inv = num.field.inv(lc)
                num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @classmethod
    def _reduced(cls, num: MultiPoly, den: MultiPoly) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def from_poly(cls, f: MultiPoly) -> "RationalFunction":
        return cls._reduced(f, MultiPoly.one(f.field, f.nvars))

    @classmethod
    def constant(cls, field: GF, nvars: int, c: int) -> "RationalFunction":
        return cls.from_poly(MultiPoly.constant(field, nvars, c))

    @classmethod
    def variable(cls, field: GF, nvars: int, i: int) -> "RationalFunction":
        return cls.from_poly(MultiPoly.variable(field, nvars, i))

    @property
    def field(self) -> GF:
        return self.num.field

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field or other.nvars != self.nvars:
                raise ValueError("rational functions over different fields")
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction.from_poly(other)
        if isinstance(other, int):
            return RationalFunction.constant(self.field, self.nvars, self.field.from_int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RationalFunction._reduced(self.num + o.num, self.den)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._reduced(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RationalFunction._reduced(self.num * o.num, self.den)
        if self.num.is_zero() or o.num.is_zero():
            return RationalFunction.constant(self.field, self.nvars, 0)
        # cross-cancel so the product is already reduced
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num, o.den) if g1.is_one() else (exact_div(self.num, g1), exact_div(o.den, g1))
        n2, d1 = (o.num, self.den) if g2.is_one() else (exact_div(o.num, g2), exact_div(self.den, g2))
        num, den = n1 * n2, d1 * d2
        lc = den.leading_coeff()
        if lc != 1:
            inv = self.field.inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        return RationalFunction._reduced(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._reduced(self.num**k, self.den**k)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RationalFunction) else other
        if o is NotImplemented or not isinstance(o, RationalFunction):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def embed(self, nvars: int, positions: Sequence[int]) -> "RationalFunction":
        return RationalFunction._reduced(self.num.embed(nvars, positions), self.den.embed(nvars, positions))

    def map_coefficients(self, fn) -> "RationalFunction":
        return RationalFunction(self.num.map_coefficients(fn), self.den.map_coefficients(fn))

    def substitute(self, values: Sequence["RationalFunction"]) -> "RationalFunction":
        """Compose with rational functions, one per variable."""
        from .rings import FractionField

        if not values:
            return self
        R = FractionField(values[0].field, values[0].nvars)
        return R.div(self.num.evaluate(values, R), self.den.evaluate(values, R))

    def format(self, names: Sequence[str] | None = None) -> str:
        n = self.num.format(names)
        if self.den.is_one():
            return n
        return f"({n})/({self.den.format(names)})"

    def __repr__(self):
        return f"RationalFunction({self.format()})"


def is_pth_power_poly(f: MultiPoly) -> bool:
    p = f.field.p
    return all(x % p == 0 for e in f.terms for x in e)


def pth_root_poly(f: MultiPoly) -> MultiPoly:
    F = f.field
    p = F.p
    return MultiPoly(F, f.nvars, {tuple(x // p for x in e): F.pth_root(c) for e, c in f.terms.items()})


def is_pth_power(x) -> bool:
    """Whether x lies in K^p.

    For a reduced fraction this is an exponent test on numerator and
    denominator; field elements are always p-th powers.
    """
    if isinstance(x, (FieldElement, int)):
        return True
    if isinstance(x, MultiPoly):
        return is_pth_power_poly(x)
    if isinstance(x, RationalFunction):
        return is_pth_power_poly(x.num) and is_pth_power_poly(x.den)
    raise TypeError(f"unsupported element {x!r}")


def lambda_root(x):
    """The p-th root function: x^(1/p) when x is a p-th power, else 0."""
    if isinstance(x, FieldElement):
        return x.pth_root()
    if isinstance(x, MultiPoly):
        return pth_root_poly(x) if is_pth_power_poly(x) else MultiPoly.zero(x.field, x.nvars)
    if isinstance(x, RationalFunction):
        if not is_pth_power(x):
            return RationalFunction.constant(x.field, x.nvars, 0)
        return RationalFunction._reduced(pth_root_poly(x.num), pth_root_poly(x.den))
    raise TypeError(f"unsupported element {x!r}")
