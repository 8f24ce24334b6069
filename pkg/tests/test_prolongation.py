import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hsfield.acceptance import _prolongation_cases
from hsfield.derivation import DerivationContext, canonical_group_derivation, trivial_derivation
from hsfield.errors import BudgetExceeded, PreconditionError
from hsfield.fields import field
from hsfield.formal_group import fgl_builtin, fgl_truncate
from hsfield.poly import MultiPoly
from hsfield.prolongation import (
    AffineVariety,
    JetRing,
    affine_space,
    axiom_instance_check,
    c_n_map,
    cv_compatibility,
    derivation_from_point,
    jet_names,
    nabla_ideal,
    nabla_point,
    points_over,
    polynomial_candidates,
    second_jet_names,
)

from strategies import polys

F2 = field(2, 1)


def add_law(p=2, m=1, e=1):
    return fgl_truncate(fgl_builtin("additive", p, e), m)


def worked_W():
    x1 = MultiPoly.variable(F2, 2, 1)
    return AffineVariety(2, (x1 - MultiPoly.one(F2, 2),), (), "W", ("X1_0", "X1_1"))


def canonical(law="additive", p=2, m=1):
    return canonical_group_derivation(fgl_builtin(law, p), m, kind="rational")


# jet rings and prolongations -----------------------------------------------------------
def test_jet_names():
    assert jet_names(1, 2, 1, 1) == ["X1_0", "X1_1"]
    assert jet_names(2, 2, 1, 2)[:4] == ["X1_0_0", "X1_0_1", "X1_1_0", "X1_1_1"]
    assert len(second_jet_names(1, 2, 1, 1)) == 4


def test_nabla_of_affine_space_is_affine_space():
    D = canonical()
    nV = nabla_ideal(affine_space(2), JetRing(D, 2))
    assert nV.arity == 4 and nV.generators == ()


def test_nabla_of_a_double_point():
    D = trivial_derivation(DerivationContext(F2, (), "polynomial", 1, 1))
    V = AffineVariety(1, (MultiPoly.monomial(F2, (2,)),))
    nV = nabla_ideal(V, JetRing(D, 1))
    assert nV.format() == ["X1_0^2"]


def test_nabla_of_a_point_over_a_parameter_field():
    D = canonical()
    # V = V(X - t) over F_2(t)
    f = MultiPoly.variable(F2, 2, 1) - MultiPoly.variable(F2, 2, 0)
    nV = nabla_ideal(AffineVariety(1, (f,), ("t",)), JetRing(D, 1))
    assert sorted(nV.format()) == ["X1_1 + 1", "t + X1_0"]
    R = D.ring
    t = R.gen(0)
    assert nV.contains([t, R.one], R, [t])
    assert not nV.contains([t, R.zero], R, [t])


def test_nabla_point_examples():
    D = canonical()
    R = D.ring
    t = R.gen(0)
    assert nabla_point(D, [t]) == [t, R.one]
    assert nabla_point(D, [R.mul(t, t), R.one]) == [R.mul(t, t), R.zero, R.one, R.zero]
    M = canonical("multiplicative")
    assert nabla_point(M, [t]) == [t, R.add(t, R.one)]


def test_c_n_examples():
    g = add_law()
    # (b0, b1) -> (c_{i,j}^k b_k) in (i, j) order
    assert c_n_map(g, [1, 0]) == [1, 0, 0, 0]
    assert c_n_map(g, [0, 1]) == [0, 1, 1, 0]
    mult = fgl_truncate(fgl_builtin("multiplicative", 2), 1)
    assert c_n_map(mult, [0, 1]) == [0, 1, 1, 1]
    with pytest.raises(ValueError):
        c_n_map(g, [1, 0, 1])


@settings(max_examples=100)
@given(st.data())
def test_c_n_is_linear_with_counit_block(data):
    p = data.draw(st.sampled_from([2, 3]))
    law = data.draw(st.sampled_from(["additive", "multiplicative", "witt2"]))
    g = fgl_truncate(fgl_builtin(law, p), 1)
    K = g.field
    P = len(g.indices())
    b = data.draw(st.lists(st.integers(0, p - 1), min_size=2 * P, max_size=2 * P))
    c = data.draw(st.lists(st.integers(0, p - 1), min_size=2 * P, max_size=2 * P))
    cb, cc = c_n_map(g, b), c_n_map(g, c)
    total = c_n_map(g, [K.add(x, y) for x, y in zip(b, c)])
    assert total == [K.add(x, y) for x, y in zip(cb, cc)]
    # the (0, j) entries reproduce the block
    for t in range(2):
        block = cb[t * P * P : (t + 1) * P * P]
        assert block[:P] == b[t * P : (t + 1) * P]


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("law", ["additive", "multiplicative"])
def test_prolongation_identities(p, law):
    rng = random.Random(p)
    for D, V, a, b, t in _prolongation_cases(rng, p, law, 2, 10):
        R = D.ring
        assert V.contains(a, R, [t])
        assert nabla_ideal(V, JetRing(D, 2)).contains(nabla_point(D, a), R, [t])
        first = nabla_point(D, b)
        assert nabla_point(D, first) == c_n_map(D.law, first, R)


# compatibility ----------------------------------------------------------------------------
@pytest.mark.parametrize("mode,q", [("pointwise", 2), ("pointwise", 4), ("symbolic", None)])
def test_worked_example_is_compatible(mode, q):
    assert cv_compatibility(add_law(), affine_space(1), worked_W(), mode, q)


@pytest.mark.parametrize("mode", ["pointwise", "symbolic"])
def test_incompatible_W(mode):
    x0 = MultiPoly.variable(F2, 2, 0)
    x1 = MultiPoly.variable(F2, 2, 1)
    # X^(1) = 0 is preserved: c_n(b0, 0) = (b0, 0, 0, 0)
    assert cv_compatibility(add_law(), affine_space(1), AffineVariety(2, (x1,)), mode)
    # the point (1, 1) is sent to (1, 1, 1, 0), whose (0, 1) jet coordinate must vanish
    W = AffineVariety(2, (x0 - MultiPoly.one(F2, 2), x1 - MultiPoly.one(F2, 2)))
    v = cv_compatibility(add_law(), affine_space(1), W, mode)
    assert not v and v.details["generator"] == "X1_1"


def test_compatibility_rejects_bad_inputs():
    with pytest.raises(ValueError):
        cv_compatibility(add_law(), affine_space(1), AffineVariety(3, ()), "pointwise")
    with pytest.raises(ValueError):
        cv_compatibility(add_law(), affine_space(1), worked_W(), "pointwise", q=6)
    with pytest.raises(ValueError):
        cv_compatibility(add_law(), affine_space(1), worked_W(), "fast")
    with pytest.raises(BudgetExceeded):
        cv_compatibility(add_law(), affine_space(1), worked_W(), "pointwise", q=4, budget=4)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.data())
def test_pointwise_and_symbolic_agree(data):
    law = data.draw(st.sampled_from(["additive", "multiplicative"]))
    g = fgl_truncate(fgl_builtin(law, 2), 1)
    gens = data.draw(st.lists(polys(F2, 2, 2, max_terms=3, nonzero=True), min_size=1, max_size=2))
    W = AffineVariety(2, tuple(gens))
    try:
        sym = cv_compatibility(g, affine_space(1), W, "symbolic", max_pairs=500)
    except BudgetExceeded:
        return
    pw = [cv_compatibility(g, affine_space(1), W, "pointwise", q) for q in (2, 4, 8)]
    if sym:
        assert all(pw)
    if not all(pw):
        assert not sym


# derivations from points ---------------------------------------------------------------------
@pytest.mark.parametrize("p", [2, 3])
def test_derivation_from_point_examples(p):
    ctx = DerivationContext(field(p, 1), ("t",), "rational", 1, 1)
    R = ctx.ring
    t = R.gen(0)
    zero = [R.zero] * (p - 1)
    assert derivation_from_point([t] + zero, ctx).images == trivial_derivation(ctx).images
    D = derivation_from_point([t, R.one] + zero[1:], ctx)
    assert D.images == canonical("additive", p).images
    with pytest.raises(PreconditionError):
        derivation_from_point([R.one] + zero, ctx)
    with pytest.raises(ValueError):
        derivation_from_point([t], ctx)


def test_derivation_from_point_checks_preconditions():
    ctx = DerivationContext(F2, ("t",), "rational", 1, 1)
    R = ctx.ring
    t = R.gen(0)
    g = add_law()
    D = derivation_from_point([t, R.one], ctx, V=affine_space(1), W=worked_W(), g=g)
    assert D.images == canonical().images
    V = AffineVariety(1, (MultiPoly.variable(F2, 1, 0),))  # X = 0 does not hold at b_0 = t
    with pytest.raises(PreconditionError):
        derivation_from_point([t, R.one], ctx, V=V)
    x0 = MultiPoly.variable(F2, 2, 0)
    x1 = MultiPoly.variable(F2, 2, 1)
    bad = AffineVariety(2, (x0 * x1 - MultiPoly.one(F2, 2),))
    with pytest.raises(PreconditionError):
        derivation_from_point([t, R.one], ctx, W=bad, g=g)


def test_point_of_a_derivation_round_trips():
    for law in ("additive", "multiplicative"):
        D = canonical(law)
        t = D.ring.gen(0)
        b = nabla_point(D, [t])
        assert derivation_from_point(b, D.context).images == D.images


def test_derivation_from_point_over_a_base():
    base = canonical()
    ctx = DerivationContext(F2, ("t", "u"), "rational", 1, 1)
    R = ctx.ring
    t, u = R.gens()
    D = derivation_from_point([u, t], ctx, base=base)
    assert D.images[1].format(["v"]) == "u + t*v"
    assert D.images[0].format(["v"]) == "t + v"


# axiom instances ------------------------------------------------------------------------------
def test_polynomial_candidates_order():
    assert [f.format(["t"]) for f in polynomial_candidates(F2, 1, 1)] == ["0", "1", "t", "t + 1"]


def test_axiom_witness_is_t():
    D = canonical()
    rep = axiom_instance_check(add_law(), D, affine_space(1), worked_W(), degree=1)
    assert rep.found and D.ring.eq(rep.witness[0], D.ring.gen(0))
    assert rep.candidates == 3 and not rep.exhausted
    assert rep.asserted == {"K-irreducible": False, "projects generically onto V": False}


def test_axiom_witness_outside_Z():
    D = canonical()
    x0 = MultiPoly.variable(F2, 2, 0)
    x1 = MultiPoly.variable(F2, 2, 1)
    W = AffineVariety(2, (x1,))
    Z = AffineVariety(2, (x0,))
    rep = axiom_instance_check(add_law(), D, affine_space(1), W, Z=Z, degree=1)
    assert rep.found and D.ring.eq(rep.witness[0], D.ring.one)


def test_axiom_search_over_finite_field_is_exhausted():
    D = canonical()
    rep = axiom_instance_check(add_law(), D, affine_space(1), worked_W(), q=4)
    assert not rep.found and rep.exhausted and rep.candidates == 4
    x1 = MultiPoly.variable(F2, 2, 1)
    rep = axiom_instance_check(add_law(), D, affine_space(1), AffineVariety(2, (x1,)), q=2)
    assert rep.found and rep.witness == (0,)


def test_axiom_search_arguments():
    D = canonical()
    with pytest.raises(ValueError):
        axiom_instance_check(add_law(), D, affine_space(1), worked_W())
    with pytest.raises(ValueError):
        axiom_instance_check(add_law(), D, affine_space(1), worked_W(), q=2, degree=1)
    with pytest.raises(BudgetExceeded):
        axiom_instance_check(add_law(), D, affine_space(2), AffineVariety(4, ()), degree=2, budget=10)


def test_points_over():
    V = AffineVariety(2, (MultiPoly.variable(F2, 2, 0) * MultiPoly.variable(F2, 2, 1),))
    assert list(points_over(V, F2)) == [(0, 0), (0, 1), (1, 0)]
    assert len(list(points_over(V, field(2, 2)))) == 7
    with pytest.raises(BudgetExceeded):
        list(points_over(V, F2, budget=3))
