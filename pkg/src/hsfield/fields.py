"""Finite fields F_q, q = p^n.

Elements are plain ints in ``range(q)``.  For n > 1 an element is the integer
whose base-p digits are the coefficients (low degree first) of its
representative polynomial modulo a fixed primitive polynomial, so the prime
subfield is exactly ``range(p)``.  :class:`FieldElement` wraps an int for
callers who want operator syntax.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import NotAUnitError

# Tables are materialized eagerly; keep them bounded.
MAX_ORDER = 1 << 16
_ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _digits(a: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _encode(digits, p: int) -> int:
    a = 0
    for d in reversed(digits):
        a = a * p + d
    return a


def _times_x(digits: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    """Multiply by x modulo a monic modulus given low-degree-first (without the leading 1)."""
    top = digits[-1]
    shifted = [0] + digits[:-1]
    if top:
        shifted = [(s - top * c) % p for s, c in zip(shifted, modulus)]
    return shifted


def _is_primitive(modulus: tuple[int, ...], p: int, n: int) -> bool:
    q = p**n
    cur = [1] + [0] * (n - 1)
    one = list(cur)
    for k in range(1, q):
        cur = _times_x(cur, modulus, p)
        if cur == one:
            return k == q - 1
    return False


@lru_cache(maxsize=None)
def primitive_modulus(p: int, n: int) -> tuple[int, ...]:
    """Least primitive monic polynomial of degree n over F_p.

    Returned low-degree-first without the leading coefficient.  Candidates are
    scanned in increasing order of their coefficient vector read from the
    x^(n-1) coefficient down, so x^2+x+1, x^3+x+1, x^4+x+1 come out for p=2.
    """
    for coeffs in product(range(p), repeat=n):
        mod = tuple(reversed(coeffs))
        if mod[0] == 0:
            continue
        if _is_primitive(mod, p, n):
            return mod
    raise ValueError(f"no primitive polynomial of degree {n} over F_{p}")


class GF:
    """The finite field with p^n elements.

    Also serves as its own coefficient-ring descriptor: ``add``, ``mul``,
    ``inv`` and friends act on raw int elements.
    """

    __slots__ = ("p", "n", "q", "modulus", "_exp", "_log", "_add", "_neg", "_digits")

    def __init__(self, p: int, n: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        q = p**n
        if q > MAX_ORDER:
            raise ValueError(f"field of order {q} exceeds the table limit {MAX_ORDER}")
        self.p, self.n, self.q = p, n, q
        self._exp = self._log = self._add = self._neg = self._digits = None
        if n == 1:
            self.modulus = ()
            return
        if modulus is None:
            modulus = primitive_modulus(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n or not _is_primitive(modulus, p, n):
            raise ValueError("modulus must be a primitive monic polynomial of degree n")
        self.modulus = modulus
        exp = [0] * (2 * q)
        log = [0] * q
        cur = [1] + [0] * (n - 1)
        for k in range(q - 1):
            a = _encode(cur, p)
            exp[k] = a
            log[a] = k
            cur = _times_x(cur, modulus, p)
        for k in range(q - 1, 2 * q):
            exp[k] = exp[k - (q - 1)]
        self._exp, self._log = exp, log
        self._digits = [tuple(_digits(a, p, n)) for a in range(q)]
        self._neg = [_encode([(-d) % p for d in self._digits[a]], p) for a in range(q)]
        if p != 2 and q <= _ADD_TABLE_LIMIT:
            self._add = [
                [_encode([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])], p) for b in range(q)]
                for a in range(q)
            ]

    # identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self):
        return hash(("GF", self.p, self.n, self.modulus))

    def __repr__(self):
        return f"GF({self.p})" if self.n == 1 else f"GF({self.p}^{self.n})"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    zero = 0
    one = 1

    # arithmetic on raw ints --------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a][b]
        p = self.p
        return _encode([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])], p)

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise NotAUnitError("0 is not invertible")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.n == 1:
            return pow(a, k, self.p)
        if a == 0:
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def is_zero(self, a: int) -> bool:
        return a == 0

    def eq(self, a: int, b: int) -> bool:
        return a == b

    def from_int(self, k: int) -> int:
        return k % self.p

    def from_base(self, c: int) -> int:
        return c

    def scalar(self, k: int, a: int) -> int:
        """k * a for an integer k."""
        return self.mul(self.from_int(k), a)

    def frobenius(self, a: int, i: int = 1) -> int:
        """a^(p^i); the identity on the prime field."""
        if self.n == 1:
            return a
        return self.pow(a, self.p ** (i % self.n))

    def pth_root(self, a: int) -> int:
        """The unique b with b^p = a (finite fields are perfect)."""
        if self.n == 1:
            return a
        return self.pow(a, self.q // self.p)

    def elements(self) -> range:
        return range(self.q)

    def generator(self) -> int:
        """The class of x (a primitive element) for n > 1; 1 for prime fields."""
        return self.p if self.n > 1 else 1

    def gen_power(self, k: int) -> int:
        if self.n == 1:
            raise ValueError("g^k syntax needs an extension field")
        return self._exp[k % (self.q - 1)]

    def format(self, a: int) -> str:
        if self.n == 1 or a in (0, 1):
            return str(a)
        return f"g^{self._log[a]}"

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        return FieldElement(self, self.from_int(value) if self.n == 1 else int(value) % self.q)


@lru_cache(maxsize=None)
def field(p: int, n: int = 1) -> GF:
    """Cached field constructor with the default modulus."""
    return GF(p, n)


@dataclass(frozen=True)
class FieldElement:
    """A field element with operator syntax."""

    field: GF
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.value, b))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return isinstance(other, FieldElement) and other.field == self.field and other.value == self.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def pth_root(self) -> "FieldElement":
        return FieldElement(self.field, self.field.pth_root(self.value))

    def frobenius(self, i: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.value, i))

    def __repr__(self):
        return f"{self.field.format(self.value)} in {self.field!r}"

    def __str__(self):
        return self.field.format(self.value)
