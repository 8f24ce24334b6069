from math import comb, prod

import pytest

from hsfield.fields import field
from hsfield.formal_group import (
    BUILTINS,
    FormalGroupLaw,
    builtin_dims,
    check_coassociativity,
    check_counit,
    check_triangularity,
    comultiplication_map,
    fgl_builtin,
    fgl_check_axioms,
    fgl_product,
    fgl_truncate,
    frobenius_twist,
    structure_constants,
)
from hsfield.poly import from_int_terms
from hsfield.trunc import TruncSpace, index_set

LAWS = [(name, e) for name in BUILTINS for e in builtin_dims(name)]


def test_builtin_formulas():
    assert fgl_builtin("additive", 2, 2).format() == "(X1 + Y1, X2 + Y2)"
    assert fgl_builtin("multiplicative", 3).format() == "(X*Y + X + Y)"
    F = fgl_builtin("witt2", 2)
    assert F.series[1] == from_int_terms(field(2, 1), 4, [((0, 1, 0, 0), 1), ((0, 0, 0, 1), 1), ((1, 0, 1, 0), 1)])


def test_witt_cocycle_at_p3():
    # ((X+Y)^3 - X^3 - Y^3)/3 = X^2 Y + X Y^2
    F = fgl_builtin("witt2", 3)
    want = from_int_terms(field(3, 1), 4, [((0, 1, 0, 0), 1), ((0, 0, 0, 1), 1), ((2, 0, 1, 0), 1), ((1, 0, 2, 0), 1)])
    assert F.series[1] == want


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("name,e", LAWS)
def test_axioms_hold(name, e, p):
    F = fgl_builtin(name, p, e)
    for m in (1, 2, 3):
        assert fgl_check_axioms(F, m), (name, p, m)


def test_axioms_fail_for_non_law():
    K = field(2, 1)
    bad = FormalGroupLaw("bad", K, 1, (from_int_terms(K, 2, [((1, 0), 1), ((0, 1), 1), ((2, 0), 1)]),))
    v = fgl_check_axioms(bad, 2)
    assert not v
    assert "associativity" in v.details["failed"]
    assert v.details["monomial"]


def test_product_twist_truncate():
    add, mult = fgl_builtin("additive", 2), fgl_builtin("multiplicative", 2)
    P = fgl_product(add, mult)
    assert P.format() == "(X1 + Y1, X2*Y2 + X2 + Y2)"
    assert fgl_check_axioms(P, 2)
    assert frobenius_twist(mult, 1).series == mult.series
    g = fgl_truncate(mult, 1)
    assert g.series[0] == g.space.from_poly(mult.series[0])


def test_frobenius_twist_over_extension():
    K = field(2, 2)
    g = K.generator()
    F = FormalGroupLaw("scaled", K, 1, (from_int_terms(K, 2, [((1, 0), 1), ((0, 1), 1)]) + from_int_terms(K, 2, [((1, 1), 1)]).scale(g),))
    T = frobenius_twist(F, 1)
    assert T.series[0].terms[(1, 1)] == K.frobenius(g, 1) != g
    assert frobenius_twist(F, 2).series == F.series


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("e", [1, 2])
def test_additive_constants_are_binomials(p, e):
    sc = structure_constants(fgl_truncate(fgl_builtin("additive", p, e), 2))
    idx = index_set(p, 2, e)
    for i in idx:
        for j in idx:
            k = tuple(a + b for a, b in zip(i, j))
            c = prod(comb(a + b, a) for a, b in zip(i, j)) % p
            want = ((k, c),) if c and all(x < p * p for x in k) else ()
            assert sc.entries(i, j) == want


def test_multiplicative_p3_example():
    sc = structure_constants(fgl_truncate(fgl_builtin("multiplicative", 3), 1))
    assert sc.get((1,), (1,), (2,)) == 2
    assert sc.get((1,), (1,), (1,)) == 1
    assert sc.get((1,), (1,), (0,)) == 0


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("name,e", LAWS)
def test_triangularity_and_counit(name, e, p):
    for m in (1, 2):
        g = fgl_truncate(fgl_builtin(name, p, e), m)
        assert check_triangularity(g)
        assert check_counit(g)
        sc = structure_constants(g)
        zero = (0,) * e
        for j in g.indices():
            assert sc.entries(zero, j) == ((j, 1),)


@pytest.mark.parametrize("name,e", LAWS)
def test_coassociativity(name, e):
    for m in (1, 2):
        assert check_coassociativity(fgl_truncate(fgl_builtin(name, 2, e), m))


def test_comultiplication_examples():
    K = field(2, 1)
    for name, expect in (("additive", {(1, 0): 1, (0, 1): 1}), ("multiplicative", {(1, 0): 1, (0, 1): 1, (1, 1): 1})):
        g = fgl_truncate(fgl_builtin(name, 2), 1)
        S = TruncSpace(K, 2, 1, 1)
        assert dict(comultiplication_map(g, S.variable(0)).items()) == expect
        assert comultiplication_map(g, S.one()) == g.space.one()


def test_structure_constants_need_truncation():
    with pytest.raises(TypeError):
        structure_constants(fgl_builtin("additive", 2))
