"""Text formats: the polynomial grammar, derivation files, variety files and records.

Polynomial grammar: integers, names, ``g^k`` (powers of the field generator
of F_{p^n}), ``+ - * / ^`` and parentheses; whitespace is ignored.

Derivation file::

    p=2 n=1 m=1 e=1 kind=rational gens=t law=additive
    gen t -> t + v

Variety file::

    p=2 n=1 params= vars=X1_0,X1_1
    X1_1 - 1

Records are one per line: space-separated ``key=value`` pairs, shell-quoted
when a value contains spaces, so :func:`parse_record` inverts :func:`format_record`.
"""

from __future__ import annotations

import re
import shlex
from typing import Iterable, Mapping, Sequence

from .derivation import DerivationContext, HSDerivation
from .errors import NotAUnitError
from .fields import GF, field as make_field
from .formal_group import fgl_builtin, fgl_truncate
from .poly import MultiPoly
from .prolongation import AffineVariety
from .ratfunc import RationalFunction
from .rings import FractionField, PolyRing
from .trunc import TruncSpace

_UNSAFE = re.compile(r"[^\w@%+=:,./-]")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ParseError(ValueError):
    """Malformed input text."""


def _tokens(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    """Recursive descent over a ring descriptor with a name environment."""

    def __init__(self, text: str, ring, env: Mapping[str, object], field: GF):
        self.toks = _tokens(text)
        self.i = 0
        self.R = ring
        self.env = env
        self.F = field
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        v = self.term()
        if sign < 0:
            v = self.R.neg(v)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                v = self.R.add(v, t) if val == "+" else self.R.sub(v, t)
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                f = self.factor()
                if val == "*":
                    v = self.R.mul(v, f)
                else:
                    if self.R.is_zero(f):
                        raise ParseError("division by zero")
                    v = self.R.mul(v, self.R.inv(f))
            elif kind in ("name", "num") or (kind == "op" and val == "("):
                v = self.R.mul(v, self.factor())  # implicit product, e.g. 2t
            else:
                return v

    def factor(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k_kind, k_val = self.peek()
            neg = False
            if k_kind == "op" and k_val == "-":
                self.take()
                neg = True
                k_kind, k_val = self.peek()
            if k_kind != "num":
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            self.take()
            k = int(k_val)
            if isinstance(base, tuple) and base[0] == "gen":
                return self.R.from_base(self.F.gen_power(-k if neg else k))
            return self.R.pow(base, -k if neg else k)
        if isinstance(base, tuple) and base[0] == "gen":
            return self.R.from_base(self.F.generator())
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.R.from_int(int(val))
        if kind == "name":
            if val in self.env:
                return self.env[val]
            if val == "g" and self.F.n > 1:
                return ("gen",)
            raise ParseError(f"unknown name {val!r}")
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_poly(text: str, field: GF, names: Sequence[str]) -> MultiPoly:
    """Parse a polynomial in ``names`` over ``field``."""
    R = PolyRing(field, len(names), tuple(names)) if names else _ConstRing(field)
    env = {n: R.gen(i) for i, n in enumerate(names)} if names else {}
    try:
        v = _Parser(text, R, env, field).parse()
    except NotAUnitError as exc:
        raise ParseError(f"{text!r} is not a polynomial: {exc}") from None
    return v if names else MultiPoly.constant(field, 0, v)


def parse_rational(text: str, field: GF, names: Sequence[str]) -> RationalFunction:
    R = FractionField(field, len(names), tuple(names))
    env = {n: R.gen(i) for i, n in enumerate(names)}
    return _Parser(text, R, env, field).parse()


class _ConstRing:
    """The base field viewed as a ring for the parser."""

    def __init__(self, field: GF):
        self.F = field
        self.zero, self.one = 0, 1

    def __getattr__(self, name):
        return getattr(self.F, name)

    def from_base(self, c):
        return c


def parse_element(text: str, ring):
    """Parse an element of a ring descriptor that has names (PolyRing, FractionField, SeriesRing)."""
    if isinstance(ring, FractionField):
        return parse_rational(text, ring.field, ring.names)
    f = parse_poly(text, ring.field, ring.names)
    return ring.coerce(f)


def v_names(e: int, stem: str = "v") -> list[str]:
    return [stem] if e == 1 else [f"{stem}{t + 1}" for t in range(e)]


def parse_series(text: str, space: TruncSpace, gens: Sequence[str], e_stem: str = "v"):
    """Parse a truncated series in v (or v1..ve) with coefficients in the context ring."""
    R = space.ring
    vn = v_names(space.nvars, e_stem)
    allnames = list(gens) + vn
    r = len(gens)
    F = R.field if not isinstance(R, GF) else R
    if isinstance(R, FractionField):
        full = parse_rational(text, F, allnames)
        if any(any(ex[r:]) for ex in full.den.terms):
            raise ParseError("denominators may not involve the series variables")
        den = RationalFunction(MultiPoly(F, r, {ex[:r]: c for ex, c in full.den.terms.items()}))
        num = full.num
    else:
        num = parse_poly(text, F, allnames)
        den = None
    buckets: dict[tuple, dict] = {}
    for ex, c in num.terms.items():
        buckets.setdefault(ex[r:], {})[ex[:r]] = c
    terms = []
    for vi, coeffs in buckets.items():
        if isinstance(R, GF):
            c = coeffs.get((), 0)
        else:
            c = MultiPoly(F, r, coeffs)
            if den is not None:
                c = RationalFunction(c) / den
            c = R.coerce(c)
        terms.append((vi, c))
    return space.from_terms(terms)


# headers and records ----------------------------------------------------------------
def parse_header(line: str) -> dict[str, str]:
    out = {}
    for part in line.split():
        if "=" not in part:
            raise ParseError(f"header entry {part!r} is not key=value")
        k, v = part.split("=", 1)
        out[k] = v
    return out


def format_record(pairs: Mapping[str, object] | Iterable[tuple[str, object]]) -> str:
    items = pairs.items() if isinstance(pairs, Mapping) else pairs
    parts = []
    for k, v in items:
        s = str(v)
        if s == "" or _UNSAFE.search(s):
            s = shlex.quote(s)
        parts.append(f"{k}={s}")
    return " ".join(parts)


def parse_record(line: str) -> dict[str, str]:
    out = {}
    for part in shlex.split(line):
        if "=" not in part:
            raise ParseError(f"record entry {part!r} is not key=value")
        k, v = part.split("=", 1)
        out[k] = v
    return out


# derivation files ----------------------------------------------------------------------
def format_derivation(D: HSDerivation) -> str:
    ctx = D.context
    head = {"p": ctx.p, "n": ctx.field.n, "m": ctx.m, "e": ctx.e, "kind": ctx.kind, "gens": ",".join(ctx.gens)}
    if ctx.precision is not None:
        head["precision"] = ctx.precision
    if D.law is not None:
        head["law"] = D.law.name.split("(")[0]
    lines = [" ".join(f"{k}={v}" for k, v in head.items())]
    names = v_names(ctx.e)
    for g, img in zip(ctx.gens, D.images):
        lines.append(f"gen {g} -> {img.format(names)}")
    return "\n".join(lines) + "\n"


def parse_derivation(text: str) -> HSDerivation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ParseError("empty derivation file")
    h = parse_header(lines[0])
    try:
        p, n, m, e = int(h["p"]), int(h.get("n", 1)), int(h["m"]), int(h.get("e", 1))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad derivation header: {exc}") from None
    gens = tuple(x for x in h.get("gens", "").split(",") if x)
    kind = h.get("kind", "rational")
    precision = int(h["precision"]) if "precision" in h else None
    K = make_field(p, n)
    ctx = DerivationContext(K, gens, kind, m, e, precision)
    law = None
    if "law" in h:
        law = fgl_truncate(fgl_builtin(h["law"], p, e, n), m)
    images = {}
    for ln in lines[1:]:
        mt = re.match(r"gen\s+(\w+)\s*->\s*(.+)$", ln)
        if not mt:
            raise ParseError(f"bad derivation line {ln!r}")
        name, body = mt.groups()
        if name not in gens:
            raise ParseError(f"unknown generator {name!r}")
        images[name] = parse_series(body, ctx.space, gens)
    missing = [g for g in gens if g not in images]
    if missing:
        raise ParseError(f"no image for generators {missing}")
    return HSDerivation(ctx, tuple(images[g] for g in gens), law)


# variety files ----------------------------------------------------------------------------
def format_variety(V: AffineVariety, p: int, n: int = 1) -> str:
    coords = list(V.coord_names) or [f"x{i + 1}" for i in range(V.arity)]
    head = f"p={p} n={n} params={','.join(V.params)} vars={','.join(coords)}"
    return "\n".join([head] + V.format()) + "\n"


def parse_variety(text: str) -> tuple[AffineVariety, GF]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ParseError("empty variety file")
    h = parse_header(lines[0])
    try:
        K = make_field(int(h["p"]), int(h.get("n", 1)))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad variety header: {exc}") from None
    params = tuple(x for x in h.get("params", "").split(",") if x)
    coords = tuple(x for x in h.get("vars", "").split(",") if x)
    if not coords:
        raise ParseError("variety header must name its coordinates (vars=...)")
    names = list(params) + list(coords)
    gens = tuple(parse_poly(ln, K, names) for ln in lines[1:])
    return AffineVariety(len(coords), gens, params, "", coords), K
