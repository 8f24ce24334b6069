from math import comb

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hsfield.acceptance import wronskian_oracle
from hsfield.derivation import (
    DerivationContext,
    absolute_constants_basis,
    apply,
    apply_component,
    canonical_derivation,
    canonical_family,
    canonical_group_derivation,
    chain_compatibility_check,
    check_hs_homomorphism,
    check_iterativity,
    component_derivations,
    compose_one_dimensional,
    constants_basis,
    constants_closure,
    dependence_over_constants,
    derivation_from_images,
    exact_precision,
    reconstruct_from_components,
    strict_extension_values,
    tensor_derivation,
    transport_derivation,
    trivial_derivation,
    truncate_derivation,
    wronskian_matrix,
)
from hsfield.errors import PreconditionError
from hsfield.fields import field
from hsfield.formal_group import BUILTINS, builtin_dims, fgl_builtin, fgl_truncate, structure_constants
from hsfield.poly import MultiPoly, monomials_up_to
from hsfield.ratfunc import RationalFunction
from hsfield.trunc import ts_coeff

from strategies import polys, rationals

F2, F3 = field(2, 1), field(3, 1)
LAWS = [(name, e) for name in BUILTINS for e in builtin_dims(name)]


def ddt(p=2, m=1, kind="rational", gens=("t",)):
    """D(t) = t + v: the iterative derivation with D_1 = d/dt."""
    ctx = DerivationContext(field(p, 1), gens, kind, m, 1)
    g = fgl_truncate(fgl_builtin("additive", p), m)
    imgs = [{(0,): ctx.ring.gen(s), (1,): 1 if s == 0 else 0} for s in range(len(gens))]
    return derivation_from_images(ctx, imgs, g, "d/dt")


def axis_free_map():
    """p=2, m=1, e=2 with D_(1,1) = d/dt and the axis components zero."""
    ctx = DerivationContext(F2, ("t",), "rational", 1, 2)
    t = ctx.ring.gen(0)
    g = fgl_truncate(fgl_builtin("additive", 2, 2), 1)
    return derivation_from_images(ctx, [{(0, 0): t, (1, 1): 1}], g)


# apply ----------------------------------------------------------------------------------
def test_apply_examples():
    D = ddt()
    R = D.ring
    t = R.gen(0)
    assert apply(D, R.from_int(1)) == D.space.constant(R.one)
    assert apply(D, R.mul(t, t)) == D.space.constant(R.mul(t, t))
    inv = R.inv(t)
    want = D.space.from_terms([((0,), inv), ((1,), R.mul(inv, inv))])
    assert apply(D, inv) == want


@pytest.mark.parametrize("p", [2, 3, 5])
def test_additive_components_are_binomial(p):
    D = canonical_group_derivation(fgl_builtin("additive", p), 2, kind="polynomial")
    K = field(p, 1)
    for n in range(12):
        x = MultiPoly.monomial(K, (n,))
        for i in range(p * p):
            want = MultiPoly.monomial(K, (n - i,), comb(n, i) % p) if i <= n else MultiPoly.zero(K, 1)
            assert apply_component(D, (i,), x) == want
    assert apply_component(D, (0,), x) == x


def test_axis_free_components_vanish():
    D = axis_free_map()
    t = D.ring.gen(0)
    assert D.ring.is_zero(apply_component(D, (1, 0), t))
    assert D.ring.is_zero(apply_component(D, (0, 1), t))
    assert D.ring.eq(apply_component(D, (1, 1), t), D.ring.one)
    comps = component_derivations(D)
    assert all(c.images == trivial_derivation(c.context).images for c in comps)
    assert compose_one_dimensional(comps).images != D.images
    v = check_iterativity(D)
    assert not v and v.details["generator"] == "t"


def test_truncate_and_compose():
    D = canonical_group_derivation(fgl_builtin("additive", 2, 2), 2, kind="polynomial")
    assert truncate_derivation(D, 2) is D
    # one copy of d/dt acting on each generator
    ctx = DerivationContext(F2, ("t1", "t2"), "polynomial", 2, 1)
    sp = ctx.space
    t1, t2 = ctx.ring.gens()
    a = derivation_from_images(ctx, [sp.from_terms([((0,), t1), ((1,), ctx.ring.one)]), sp.constant(t2)])
    b = derivation_from_images(ctx, [sp.constant(t1), sp.from_terms([((0,), t2), ((1,), ctx.ring.one)])])
    assert compose_one_dimensional([a, b]).images == D.images


def test_composition_requires_commuting_components():
    ctx = DerivationContext(F2, ("t",), "polynomial", 1, 1)
    t = ctx.ring.gen(0)
    a = derivation_from_images(ctx, [{(0,): t, (1,): 1}])
    b = derivation_from_images(ctx, [{(0,): t, (1,): t}])
    with pytest.raises(PreconditionError):
        compose_one_dimensional([a, b])


def test_homomorphism_check():
    ctx = DerivationContext(F2, ("t",), "rational", 1, 1)
    t = ctx.ring.gen(0)
    assert check_hs_homomorphism(trivial_derivation(ctx))
    assert not check_hs_homomorphism(derivation_from_images(ctx, [{(0,): ctx.ring.add(t, ctx.ring.one)}]))
    assert check_hs_homomorphism(canonical_group_derivation(fgl_builtin("multiplicative", 2), 1))


# iterativity ------------------------------------------------------------------------------
def test_ddt_iterative_and_square_zero():
    D = ddt()
    assert check_iterativity(D)
    R = D.ring
    x = R.div(R.add(R.pow(R.gen(0), 3), R.one), R.gen(0))
    once = apply_component(D, (1,), x)
    assert R.is_zero(apply_component(D, (1,), once))


def test_semidirect_rule_on_canonical_derivation():
    G = fgl_builtin("ga_semidirect_gm", 3)
    D = canonical_group_derivation(G, 1, kind="polynomial")
    R = D.ring
    t1, t2 = R.gens()
    for x in (t1, t2, R.mul(t1, t2), R.add(R.pow(t1, 2), t2), R.pow(R.mul(t1, t2), 2)):
        left = apply_component(D, (1, 0), apply_component(D, (0, 1), x))
        right = R.add(apply_component(D, (1, 1), x), apply_component(D, (1, 0), x))
        assert R.eq(left, right)
        assert R.eq(apply_component(D, (0, 1), apply_component(D, (1, 0), x)), apply_component(D, (1, 1), x))


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("name,e", LAWS)
def test_iterativity_is_the_structure_constant_identity(name, e, p):
    G = fgl_builtin(name, p, e)
    for m in (1, 2):
        D = canonical_group_derivation(G, m, kind="polynomial")
        sc = structure_constants(fgl_truncate(G, m))
        R = D.ring
        idx = D.context.indices()
        for t in R.gens():
            Dk = {k: apply_component(D, k, t) for k in idx}
            for i in idx:
                for j in idx:
                    left = apply_component(D, j, Dk[i])
                    right = R.zero
                    for k, c in sc.entries(i, j):
                        right = R.add(right, R.mul(R.from_base(c), Dk[k]))
                    assert R.eq(left, right), (name, m, i, j)
        assert check_iterativity(D)


# canonical derivations --------------------------------------------------------------------
def test_canonical_examples():
    D = canonical_derivation(fgl_builtin("additive", 2), 1)
    X = D.ring.gen(0)
    assert D.images[0] == D.space.from_terms([((0,), X), ((1,), D.ring.one)])
    M = canonical_derivation(fgl_builtin("multiplicative", 2), 1)
    R = M.ring
    assert R.eq(apply_component(M, (1,), R.gen(0)), R.add(R.one, R.gen(0)))
    assert apply(M, R.from_int(1)) == M.space.one()
    assert exact_precision(M, (1,)) == 15


def test_canonical_group_examples():
    add = canonical_group_derivation(fgl_builtin("additive", 2), 1, kind="polynomial")
    assert add.images[0].format(["v"]) == "t + v"
    mult = canonical_group_derivation(fgl_builtin("multiplicative", 2), 2, kind="polynomial")
    assert mult.images[0].format(["v"]) == "t + (t + 1)*v"
    assert check_iterativity(mult, fgl_truncate(fgl_builtin("multiplicative", 2), 2))
    witt = canonical_group_derivation(fgl_builtin("witt2", 2), 1, kind="polynomial")
    assert [img.format(["v1", "v2"]) for img in witt.images] == ["t1 + v1", "t2 + v2 + t1*v1"]


def _chain_rule_first_order(F, f):
    """sum_j df/dX_j * dF_j/dv_i (0, X) for the translation x -> F(v, x)."""
    e = F.dim
    K = F.field
    out = []
    for i in range(e):
        acc = MultiPoly.zero(K, e)
        for j, Fj in enumerate(F.series):
            coeff = Fj.derivative(i).substitute([MultiPoly.zero(K, e)] * e + [MultiPoly.variable(K, e, s) for s in range(e)])
            acc = acc + f.derivative(j) * coeff
        out.append(acc)
    return out


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("name,e", LAWS)
def test_first_order_components_follow_the_chain_rule(name, e, p):
    F = fgl_builtin(name, p, e)
    D = canonical_derivation(F, 1)
    R = D.ring
    for mono in monomials_up_to(e, 8):
        f = MultiPoly.monomial(F.field, mono)
        want = _chain_rule_first_order(F, f)
        for i, u in enumerate(D.context.unit_vectors()):
            assert R.eq(apply_component(D, u, f), R.coerce(want[i]))


@pytest.mark.parametrize("e", [1, 2])
def test_additive_first_order_components_are_partials(e):
    F = fgl_builtin("additive", 2, e)
    D = canonical_derivation(F, 1)
    R = D.ring
    for mono in monomials_up_to(e, 8):
        f = MultiPoly.monomial(F.field, mono)
        for i, u in enumerate(D.context.unit_vectors()):
            assert R.eq(apply_component(D, u, f), R.coerce(f.derivative(i)))


# constants --------------------------------------------------------------------------------
def test_constants_of_additive_series():
    D = canonical_derivation(fgl_builtin("additive", 2), 1)
    rep = constants_basis(D, 6)
    assert [f.format(["X"]) for f in rep.basis] == ["1", "X^2", "X^4", "X^6"]
    assert rep.strict


def test_zero_derivation_is_not_strict():
    ctx = DerivationContext(F2, ("X",), "series", 1, 1, 16)
    rep = constants_basis(trivial_derivation(ctx), 3)
    assert rep.dimension == 4 and not rep.strict


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("name,e", LAWS)
def test_constants_equal_absolute_constants_and_are_closed(name, e, p):
    for m in (1, 2):
        D = canonical_group_derivation(fgl_builtin(name, p, e), m, kind="polynomial")
        rep = constants_basis(D, 5)
        assert rep.basis == absolute_constants_basis(truncate_derivation(D, 1), 5).basis
        assert constants_closure(D, rep)


# Wronskian --------------------------------------------------------------------------------
def test_wronskian_examples():
    D = ddt()
    R = D.ring
    t = R.gen(0)
    M = wronskian_matrix(D, [R.one, t])
    assert M == [[R.one, t], [R.zero, R.one]]
    assert not dependence_over_constants(D, [R.one, t])
    assert wronskian_matrix(D, [R.one, R.mul(t, t)]) == [[R.one, R.mul(t, t)], [R.zero, R.zero]]
    assert dependence_over_constants(D, [R.one, R.mul(t, t)])
    assert dependence_over_constants(D, [R.one, t, R.inv(R.add(t, R.one))])


def test_wronskian_needs_iterativity():
    with pytest.raises(PreconditionError):
        dependence_over_constants(axis_free_map(), [axis_free_map().ring.one])


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.lists(rationals(F2, 1, 3), min_size=1, max_size=3))
def test_wronskian_matches_linear_oracle(xs):
    D = ddt()
    if xs[0].is_zero():
        xs[0] = RationalFunction.constant(F2, 1, 1)
    assert dependence_over_constants(D, xs) == wronskian_oracle(xs)


@settings(max_examples=50, deadline=None)
@given(st.lists(rationals(F3, 1, 2), min_size=4, max_size=4))
def test_more_than_p_elements_are_dependent(xs):
    D = ddt(p=3)
    assert dependence_over_constants(D, xs)


# Leibniz ----------------------------------------------------------------------------------
CONTEXTS = [
    ("additive", 2, 1, "rational"),
    ("multiplicative", 3, 1, "rational"),
    ("multiplicative", 2, 2, "polynomial"),
    ("witt2", 2, 1, "polynomial"),
    ("ga_semidirect_gm", 3, 1, "polynomial"),
]


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.data())
def test_leibniz(data):
    name, p, m, kind = data.draw(st.sampled_from(CONTEXTS))
    D = canonical_group_derivation(fgl_builtin(name, p), m, kind=kind)
    K = field(p, 1)
    n = len(D.context.gens)
    gen = rationals(K, n, 2) if kind == "rational" else polys(K, n, 3)
    x, y = data.draw(gen), data.draw(gen)
    R = D.ring
    x, y = R.coerce(x), R.coerce(y)
    assert apply(D, x) * apply(D, y) == apply(D, R.mul(x, y))


# tensor and transport ---------------------------------------------------------------------
def test_tensor_examples():
    Dt = ddt(gens=("t",))
    Ds = ddt(gens=("s",))
    T = tensor_derivation(Dt, Ds)
    assert [img.format(["v"]) for img in T.images] == ["t + v", "s + v"]
    assert check_iterativity(T)
    triv = trivial_derivation(DerivationContext(F2, ("s",), "rational", 1, 1))
    DT = tensor_derivation(Dt, triv)
    assert [img.format(["v"]) for img in DT.images] == ["t + v", "s"]
    z1 = trivial_derivation(DerivationContext(F2, ("a",), "rational", 1, 1))
    z2 = trivial_derivation(DerivationContext(F2, ("b",), "rational", 1, 1))
    Z = tensor_derivation(z1, z2)
    assert Z.images == trivial_derivation(Z.context).images


def test_transport_examples():
    D = ddt()
    R = D.ring
    t = R.gen(0)
    assert transport_derivation(D, [t], [t]).images == D.images
    shifted = transport_derivation(D, [R.add(t, R.one)], [R.sub(t, R.one)])
    assert shifted.images == D.images
    with pytest.raises(PreconditionError):
        transport_derivation(D, [R.mul(t, t)], [t])


def test_transport_twists_the_law_over_extension_fields():
    K = field(2, 2)
    ctx = DerivationContext(K, ("t",), "rational", 1, 1)
    g = fgl_truncate(fgl_builtin("additive", 2, 1, 2), 1)
    t = ctx.ring.gen(0)
    D = derivation_from_images(ctx, [{(0,): t, (1,): 1}], g)
    T = transport_derivation(D, [t], [t], frobenius_power=1)
    assert check_iterativity(T)


# strict extensions and chains ---------------------------------------------------------------
def test_strict_extension_of_a_square_root():
    ctx = DerivationContext(F2, ("s", "t"), "rational", 2, 1)
    g = fgl_truncate(fgl_builtin("additive", 2), 2)
    s, t = ctx.ring.gens()
    D = derivation_from_images(ctx, [{(0,): s}, {(0,): t, (1,): 1}], g)
    ext = strict_extension_values(D, s, root_name="a")
    assert ext.derivation.context.gens == ("a", "t")
    assert all(ext.derivation.ring.is_zero(v) for i, v in ext.values.items() if any(i))
    assert ext.verdict and check_iterativity(ext.derivation)


def test_strict_extension_inside_k_agrees_with_d():
    D = ddt(m=2)
    R = D.ring
    t = R.gen(0)
    ext = strict_extension_values(D, R.mul(t, t))
    assert ext.verdict
    assert R.eq(ext.root, t)
    assert ext.derivation.images == truncate_derivation(D, 1).images


@pytest.mark.parametrize("name,e", LAWS)
def test_chain_of_canonical_families(name, e):
    F = fgl_builtin(name, 2, e)
    fam = canonical_family(F, 3)
    assert chain_compatibility_check(fam, F)
    assert chain_compatibility_check(fam[:1], F)


def test_corrupted_chain_fails():
    F = fgl_builtin("additive", 2)
    fam = canonical_family(F, 3)
    D2 = fam[1]
    X = D2.ring.gen(0)
    bad_img = D2.images[0] + D2.space.monomial((2,), D2.ring.add(X, D2.ring.one))
    bad = derivation_from_images(D2.context, [bad_img], D2.law)
    assert not chain_compatibility_check([fam[0], bad, fam[2]], F)


@pytest.mark.parametrize("name,e", LAWS)
def test_reconstruction_from_axis_components(name, e):
    for m in (1, 2):
        G = fgl_builtin(name, 2, e)
        D = canonical_group_derivation(G, m, kind="polynomial")
        rebuilt = reconstruct_from_components(component_derivations(D), fgl_truncate(G, m))
        assert rebuilt.images == D.images


def test_ts_coeff_of_images():
    D = ddt()
    assert ts_coeff(D.images[0], (1,)) == D.ring.one
