"""Jet rings, prolongations, the comultiplication map on jets, and axiom instance checks.

Polynomials on an affine variety are :class:`MultiPoly` values over F_q whose
first ``len(params)`` variables are generators of the HS-field K (so
coefficients from k[params] are allowed) followed by the coordinates.

Jet coordinates X_t^(i) of the n-dimensional affine space are ordered by
(t, i) with i running over [p^m]^e in graded lex order; a second prolongation
adds an index j the same way, giving the (t, i, j) order used by c_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Iterable, Sequence

from .derivation import DerivationContext, HSDerivation, apply, derivation_from_images, trivial_derivation
from .errors import BudgetExceeded, PreconditionError, Verdict
from .fields import GF, field as make_field
from .formal_group import TruncatedGroupLaw, structure_constants
from .groebner import DEFAULT_MAX_PAIRS, radical_membership
from .poly import MultiPoly, monomials_up_to
from .ratfunc import RationalFunction
from .rings import PolyRing
from .trunc import Exps, TruncSpace, index_set, ts_coeff, ts_substitute

DEFAULT_POINT_BUDGET = 10**6


def jet_names(n: int, p: int, m: int, e: int, stem: str = "X") -> list[str]:
    """Names X<t>_<i1>_..._<ie> in (t, i) order, t counted from 1."""
    return [f"{stem}{t + 1}_" + "_".join(map(str, i)) for t in range(n) for i in index_set(p, m, e)]


def second_jet_names(n: int, p: int, m: int, e: int, stem: str = "X") -> list[str]:
    """Names of the coordinates of the second prolongation, (t, i, j) order."""
    idx = index_set(p, m, e)
    return [
        f"{stem}{t + 1}_" + "_".join(map(str, i)) + "__" + "_".join(map(str, j)) for t in range(n) for i in idx for j in idx
    ]


@dataclass(frozen=True)
class AffineVariety:
    """Zero set of ``generators`` in affine ``arity``-space over K.

    Each generator is a polynomial in ``len(params) + arity`` variables: the
    parameters (generators of K) first, then the coordinates.
    """

    arity: int
    generators: tuple[MultiPoly, ...]
    params: tuple[str, ...] = ()
    name: str = ""
    coord_names: tuple[str, ...] = dc_field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(g for g in self.generators if not g.is_zero()))
        object.__setattr__(self, "params", tuple(self.params))
        nv = len(self.params) + self.arity
        for g in self.generators:
            if g.nvars != nv:
                raise ValueError(f"generator has {g.nvars} variables, expected {nv}")
        if self.coord_names and len(self.coord_names) != self.arity:
            raise ValueError("one name per coordinate")

    @property
    def nvars(self) -> int:
        return len(self.params) + self.arity

    def names(self) -> list[str]:
        coords = list(self.coord_names) or [f"x{i + 1}" for i in range(self.arity)]
        return list(self.params) + coords

    def has_parameters(self) -> bool:
        r = len(self.params)
        return any(any(e[:r]) for g in self.generators for e in g.terms)

    def contains(self, point: Sequence, ring, param_values: Sequence = ()) -> bool:
        """All generators vanish at ``point`` (coordinates in ``ring``)."""
        if len(point) != self.arity:
            raise ValueError("point has the wrong arity")
        args = list(param_values) + list(point)
        if len(args) != self.nvars:
            raise ValueError("parameter values missing")
        return all(ring.is_zero(g.evaluate(args, ring)) for g in self.generators)

    def format(self) -> list[str]:
        names = self.names()
        return [g.format(names) for g in self.generators]


def affine_space(n: int, params: Sequence[str] = ()) -> AffineVariety:
    return AffineVariety(n, (), tuple(params), f"A^{n}")


@dataclass(frozen=True)
class JetRing:
    """K{X_1..X_n}: K-parameters followed by jet variables X_t^(i), (t, i) order."""

    derivation: HSDerivation
    n: int
    stem: str = "X"

    @property
    def context(self) -> DerivationContext:
        return self.derivation.context

    @property
    def indices(self) -> tuple[Exps, ...]:
        c = self.context
        return index_set(c.p, c.m, c.e)

    @property
    def width(self) -> int:
        return len(self.indices)

    @property
    def nvars(self) -> int:
        return len(self.context.gens) + self.n * self.width

    def position(self, t: int, i: Exps) -> int:
        return len(self.context.gens) + t * self.width + self.indices.index(tuple(i))

    def names(self) -> list[str]:
        c = self.context
        return list(c.gens) + jet_names(self.n, c.p, c.m, c.e, self.stem)

    def variable(self, t: int, i: Exps) -> MultiPoly:
        return MultiPoly.variable(self.context.field, self.nvars, self.position(t, i))

    def _param_images(self, params: Sequence[str], ring: PolyRing, space: TruncSpace):
        """D(s) for each parameter s, with coefficients moved into the jet ring."""
        ctx = self.context
        if tuple(params) != ctx.gens[: len(params)]:
            raise ValueError(f"variety parameters {params} are not the leading field generators {ctx.gens}")
        out = []
        r = len(params)
        for name in params:
            img = self.derivation.image(name)
            terms = []
            for i, c in img.items():
                if isinstance(c, RationalFunction):
                    if not c.is_polynomial():
                        raise ValueError(f"D({name}) has non-polynomial coefficients; clear denominators first")
                    c = c.num
                terms.append((i, c.embed(ring.nvars, list(range(r)))))
            out.append(space.from_terms(terms))
        return out

    def derivation_images(self, params: Sequence[str]):
        """Arguments for substitution: D(params) then X_t -> sum_i X_t^(i) v^i."""
        c = self.context
        ring = PolyRing(c.field, len(params) + self.n * self.width)
        space = TruncSpace(ring, c.p, c.m, c.e)
        args = self._param_images(params, ring, space)
        r = len(params)
        for t in range(self.n):
            terms = [(i, MultiPoly.variable(c.field, ring.nvars, r + t * self.width + pos)) for pos, i in enumerate(self.indices)]
            args.append(space.from_terms(terms))
        return args, space


def nabla_ideal(V: AffineVariety, jet: JetRing) -> AffineVariety:
    """The prolongation: generators D_j(f) for f defining V and j in [p^m]^e."""
    if V.arity != jet.n:
        raise ValueError("variety arity differs from the jet ring's")
    ctx = jet.context
    if not V.generators:
        return AffineVariety(jet.n * jet.width, (), V.params, f"nabla({V.name})" if V.name else "", tuple(jet_names(jet.n, ctx.p, ctx.m, ctx.e, jet.stem)))
    args, space = jet.derivation_images(V.params)
    gens = []
    for f in V.generators:
        img = ts_substitute(f, args)
        for j in jet.indices:
            d = ts_coeff(img, j)
            if not d.is_zero():
                gens.append(d)
    return AffineVariety(
        jet.n * jet.width,
        tuple(gens),
        V.params,
        f"nabla({V.name})" if V.name else "",
        tuple(jet_names(jet.n, ctx.p, ctx.m, ctx.e, jet.stem)),
    )


def nabla_point(D: HSDerivation, a: Sequence) -> list:
    """D_V(a) = (D_i(a_t)) in (t, i) order."""
    idx = D.context.indices()
    out = []
    for x in a:
        img = apply(D, x)
        out.extend(ts_coeff(img, i) for i in idx)
    return out


def c_n_map(g: TruncatedGroupLaw, b: Sequence, ring=None) -> list:
    """(b_{t,i})  ->  (sum_k c_{i,j}^k b_{t,k}) in (t, i, j) order."""
    idx = g.indices()
    P = len(idx)
    if len(b) % P:
        raise ValueError(f"point arity {len(b)} is not a multiple of p^(me) = {P}")
    R = ring if ring is not None else g.field
    sc = structure_constants(g)
    pos = {i: n for n, i in enumerate(idx)}
    out = []
    for t in range(len(b) // P):
        block = b[t * P : (t + 1) * P]
        for i in idx:
            for j in idx:
                acc = R.zero
                for k, c in sc.entries(i, j):
                    bk = block[pos[k]]
                    if not R.is_zero(bk):
                        acc = R.add(acc, R.mul(R.from_base(c), bk))
                out.append(acc)
    return out


# compatibility -------------------------------------------------------------------
def _trivial_jet(g: TruncatedGroupLaw, n: int) -> JetRing:
    ctx = DerivationContext(g.field, (), "polynomial", g.level, g.dim)
    return JetRing(trivial_derivation(ctx), n)


def _require_constant_coefficients(W: AffineVariety):
    if W.has_parameters():
        raise ValueError("compatibility checks need W defined over the constant field k")


def _strip_params(W: AffineVariety) -> AffineVariety:
    if not W.params:
        return W
    r = len(W.params)
    gens = tuple(MultiPoly(g.field, W.arity, {e[r:]: c for e, c in g.terms.items()}) for g in W.generators)
    return AffineVariety(W.arity, gens, (), W.name, W.coord_names)


def points_over(V: AffineVariety, K: GF, budget: int = DEFAULT_POINT_BUDGET) -> Iterable[tuple[int, ...]]:
    """All F_q-points of V (no parameters), in lexicographic order of coordinates."""
    if K.q**V.arity > budget:
        raise BudgetExceeded(f"{K.q}^{V.arity} candidate points exceed the budget {budget}")
    gens = [g.with_field(K) if g.field != K else g for g in V.generators]
    for pt in product(range(K.q), repeat=V.arity):
        if all(g.evaluate(list(pt)) == 0 for g in gens):
            yield pt


def cv_compatibility(
    g: TruncatedGroupLaw,
    V: AffineVariety,
    W: AffineVariety,
    mode: str = "pointwise",
    q: int | None = None,
    budget: int = DEFAULT_POINT_BUDGET,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> Verdict:
    """Whether c_n(W) lies in nabla(W).

    pointwise: every F_q-point b of W has c_n(b) on nabla(W).
    symbolic:  every generator of nabla(W), pulled back through the linear map
               c_n, lies in the radical of W's ideal.
    """
    n = V.arity
    P = len(g.indices())
    if W.arity != n * P:
        raise ValueError(f"W must live in arity n*p^(me) = {n * P}")
    _require_constant_coefficients(W)
    W0 = _strip_params(W)
    nW = nabla_ideal(W0, _trivial_jet(g, W0.arity))
    if mode == "pointwise":
        p = g.p
        q = q or p
        k = 1
        while p**k < q:
            k += 1
        if p**k != q:
            raise ValueError(f"q = {q} is not a power of p = {p}")
        K = make_field(p, k)
        ngens = [h.with_field(K) for h in nW.generators]
        count = 0
        for b in points_over(W0, K, budget):
            count += 1
            image = c_n_map(g, list(b), K)
            for h in ngens:
                if h.evaluate(image) != 0:
                    return Verdict.failed("c_n(b) leaves nabla(W)", point=b, q=q, generator=h.format(nW.names()))
        return Verdict.passed(mode="pointwise", q=q, points=count)
    if mode == "symbolic":
        F = g.field
        ys = [MultiPoly.variable(F, W0.arity, s) for s in range(W0.arity)]
        ring = PolyRing(F, W0.arity)
        forms = c_n_map(g, ys, ring)
        for h in nW.generators:
            pulled = h.substitute(forms)
            if not radical_membership(pulled, list(W0.generators), max_pairs=max_pairs):
                return Verdict.failed("pulled-back generator not in rad(I(W))", generator=h.format(nW.names()))
        return Verdict.passed(mode="symbolic", generators=len(nW.generators))
    raise ValueError(f"unknown mode {mode!r}; use pointwise or symbolic")


# derivations from points ------------------------------------------------------------------
def derivation_from_point(
    b: Sequence,
    context: DerivationContext,
    V: AffineVariety | None = None,
    W: AffineVariety | None = None,
    g: TruncatedGroupLaw | None = None,
    base: HSDerivation | None = None,
    q: int | None = None,
) -> HSDerivation:
    """The HS-derivation on K(b_0) with D(b_{t,0}) = sum_i b_{t,i} v^i.

    ``context`` names the new transcendental generators b_0 (after the base
    field's generators when ``base`` is given) and fixes m, e.  Entries of b
    must lie in the context ring.  Membership b in nabla(V) and, when W and g
    are given, c_n-compatibility of W are checked as preconditions.
    """
    R = context.ring
    idx = context.indices()
    P = len(idx)
    r0 = len(base.context.gens) if base is not None else 0
    n = len(context.gens) - r0
    if len(b) != n * P:
        raise ValueError(f"expected {n * P} coordinates, got {len(b)}")
    try:
        b = [R.coerce(x) for x in b]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"coordinates outside K(b_0): {exc}") from None
    for t in range(n):
        if not R.eq(b[t * P], R.gen(r0 + t)):
            raise PreconditionError(f"b_{{{t},0}} must be the generator {context.gens[r0 + t]}")
    images = []
    if base is not None:
        if base.context.gens != context.gens[:r0]:
            raise ValueError("context must extend the base field's generators")
        for img in base.images:
            images.append({i: R.coerce(_lift_base(c, len(context.gens), r0)) for i, c in img.items()})
    for t in range(n):
        images.append({i: b[t * P + pos] for pos, i in enumerate(idx)})
    D = derivation_from_images(context, images, g)
    if V is not None:
        if V.arity != n:
            raise ValueError("V has the wrong arity")
        jet = JetRing(D, n)
        nV = nabla_ideal(_strip_params(V) if not V.has_parameters() else V, jet)
        params = [R.gen(s) for s in range(r0)] if nV.params else []
        if not nV.contains(b, R, params):
            raise PreconditionError("b does not lie on nabla(V)")
    if W is not None:
        if g is None:
            raise ValueError("a group law is needed to check compatibility of W")
        v = cv_compatibility(g, V or affine_space(n), W, "pointwise", q)
        if not v:
            raise PreconditionError(f"W is not c-compatible: {v.details}")
    return D


def _lift_base(c, nvars: int, r0: int):
    return c.embed(nvars, list(range(r0)))


# geometric axiom instances -------------------------------------------------------------------
@dataclass(frozen=True)
class AxiomReport:
    witness: tuple | None
    exhausted: bool
    candidates: int
    search: str
    asserted: dict
    compatibility: Verdict | None = None

    @property
    def found(self) -> bool:
        return self.witness is not None


def polynomial_candidates(field: GF, nvars: int, d: int) -> list[MultiPoly]:
    """Polynomials of degree <= d ordered by coefficient vector, highest monomial most significant.

    Over F_2 in one variable with d = 1 this gives 0, 1, t, t + 1.
    """
    monos = monomials_up_to(nvars, d)
    q = field.q
    out = []
    for code in range(q ** len(monos)):
        terms = {}
        x = code
        for ex in monos:
            x, c = divmod(x, q)
            if c:
                terms[ex] = c
        out.append(MultiPoly(field, nvars, terms))
    return out


def axiom_instance_check(
    g: TruncatedGroupLaw,
    D: HSDerivation,
    V: AffineVariety,
    W: AffineVariety,
    Z: AffineVariety | None = None,
    q: int | None = None,
    degree: int | None = None,
    budget: int = DEFAULT_POINT_BUDGET,
    irreducible: bool = False,
    generic_projection: bool = False,
    check_compatibility: bool = True,
) -> AxiomReport:
    """Search for a in V with D_V(a) in W and outside Z (Z = None means Z is empty).

    Exactly one of ``q`` (search F_q^n, where every derivation vanishes) and
    ``degree`` (search tuples of polynomials of degree <= d in K's generators)
    is given.  Irreducibility and generic projection are recorded as asserted,
    never verified.
    """
    if (q is None) == (degree is None):
        raise ValueError("give exactly one of q or degree")
    n = V.arity
    ctx = D.context
    asserted = {"K-irreducible": irreducible, "projects generically onto V": generic_projection}
    compat = None
    if check_compatibility and not W.has_parameters():
        compat = cv_compatibility(g, V, W, "pointwise", q or g.p, budget)
        if not compat:
            raise PreconditionError(f"c_V(W) is not contained in nabla(W): {compat.details}")
    P = len(ctx.indices())
    if q is not None:
        p = ctx.p
        k = 1
        while p**k < q:
            k += 1
        if p**k != q:
            raise ValueError(f"q = {q} is not a power of p = {p}")
        K = make_field(p, k)
        if K.q**n > budget:
            raise BudgetExceeded(f"{K.q}^{n} candidates exceed the budget {budget}")
        if any(v.has_parameters() for v in (V, W) + ((Z,) if Z is not None else ())):
            raise ValueError("an F_q search needs varieties defined over k")
        Vk, Wk = _strip_params(V), _strip_params(W)
        Zk = _strip_params(Z) if Z is not None else None
        count = 0
        for a in product(range(K.q), repeat=n):
            count += 1
            if not Vk.contains(a, K):
                continue
            # HS-derivations vanish on the perfect field F_q: D_V(a) = (a_t, 0, ..., 0)
            pt = [a[t] if pos == 0 else 0 for t in range(n) for pos in range(P)]
            if Wk.contains(pt, K) and not (Zk is not None and Zk.contains(pt, K)):
                return AxiomReport(tuple(a), False, count, f"F_{q}^{n}", asserted, compat)
        return AxiomReport(None, True, count, f"F_{q}^{n}", asserted, compat)
    R = ctx.ring
    r = len(ctx.gens)
    polys = polynomial_candidates(ctx.field, r, degree)
    if len(polys) ** n > budget:
        raise BudgetExceeded(f"{len(polys)}^{n} candidates exceed the budget {budget}")
    params = [R.gen(s) for s in range(r)]
    count = 0
    for combo in product(polys, repeat=n):
        count += 1
        a = [R.coerce(f) for f in combo]
        if not V.contains(a, R, params if V.params else []):
            continue
        pt = nabla_point(D, a)
        if not W.contains(pt, R, params if W.params else []):
            continue
        if Z is not None and Z.contains(pt, R, params if Z.params else []):
            continue
        return AxiomReport(tuple(combo), False, count, f"degree<={degree}", asserted, compat)
    return AxiomReport(None, True, count, f"degree<={degree}", asserted, compat)
