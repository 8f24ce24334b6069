import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsfield.errors import NotAUnitError
from hsfield.fields import field
from hsfield.formal_group import fgl_builtin, fgl_truncate
from hsfield.poly import MultiPoly
from hsfield.trunc import TruncSpace, index_set, ts_coeff, ts_invert, ts_mul, ts_substitute, ts_truncate

from strategies import series

CONFIGS = [(p, e, m) for p in (2, 3) for e in (1, 2) for m in (1, 2)]


def space(p, e, m):
    return TruncSpace(field(p, 1), p, m, e)


def test_index_set_order():
    assert index_set(2, 1, 2) == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert index_set(3, 1, 1) == ((0,), (1,), (2,))


def test_mul_examples():
    S = space(2, 1, 1)
    one, v = S.one(), S.variable(0)
    assert ts_mul(one + v, one + v) == one
    a = S.from_terms([((0,), 1), ((1,), 1)])
    assert ts_mul(a, one) == a
    S2 = space(2, 1, 2)
    v2 = S2.variable(0)
    assert ts_mul(v2, v2**3).is_zero()


def test_substitute_examples():
    K = field(2, 1)
    S = TruncSpace(K, 2, 2, 2)
    X, Y = S.variable(0), S.variable(1)
    assert ts_substitute(MultiPoly.variable(K, 1, 0), [X + Y]) == X + Y
    assert ts_substitute(MultiPoly.monomial(K, (2,)), [X + Y]) == X * X + Y * Y
    assert ts_substitute(MultiPoly.constant(K, 1, 1), [X]) == S.one()


def test_invert_examples():
    S = space(2, 1, 1)
    assert ts_invert(S.one()) == S.one()
    u = S.one() + S.variable(0)
    assert ts_invert(u) == u
    with pytest.raises(NotAUnitError):
        ts_invert(S.variable(0))


def test_truncate_and_coeff_examples():
    S = space(2, 1, 2)
    v = S.variable(0)
    a = S.one() + v + v**2 + v**3
    assert ts_truncate(a, 2) == a
    S1 = space(2, 1, 1)
    assert ts_truncate(a, 1) == S1.one() + S1.variable(0)
    mult = fgl_truncate(fgl_builtin("multiplicative", 2), 1).series[0]
    assert ts_coeff(mult, (1, 1)) == 1
    with pytest.raises(ValueError):
        ts_coeff(a, (4,))


@settings(max_examples=1000)
@given(st.data())
def test_ring_axioms(data):
    p, e, m = data.draw(st.sampled_from(CONFIGS))
    S = space(p, e, m)
    a, b, c = (data.draw(series(S, st.integers(0, p - 1))) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=200)
@given(st.data())
def test_invert_random_units(data):
    p, e, m = data.draw(st.sampled_from(CONFIGS))
    S = space(p, e, m)
    a = data.draw(series(S, st.integers(0, p - 1)))
    u = a - S.constant(a.constant_term()) + S.constant(data.draw(st.integers(1, p - 1)))
    assert ts_mul(u, ts_invert(u)) == S.one()


@settings(max_examples=200)
@given(st.data())
def test_truncation_is_a_ring_map(data):
    p, e = data.draw(st.sampled_from([(2, 1), (2, 2), (3, 1)]))
    S = space(p, e, 2)
    a, b = (data.draw(series(S, st.integers(0, p - 1))) for _ in range(2))
    assert ts_truncate(a * b, 1) == ts_truncate(a, 1) * ts_truncate(b, 1)
    assert ts_truncate(a + b, 1) == ts_truncate(a, 1) + ts_truncate(b, 1)


@settings(max_examples=100)
@given(st.data())
def test_substitution_is_associative(data):
    p = data.draw(st.sampled_from([2, 3]))
    K = field(p, 1)
    S = TruncSpace(K, p, 2, 1)
    coeffs = st.integers(0, p - 1)
    f = MultiPoly(K, 1, {(k,): data.draw(coeffs) for k in range(4)})
    g = MultiPoly(K, 1, {(k,): data.draw(coeffs) for k in range(1, 4)})
    h = data.draw(series(S, coeffs))
    h = h - S.constant(h.constant_term())
    # f(g)(h) = f(g(h))
    fg = ts_substitute(f, [TruncSpace(K, p, 2, 1).from_poly(g)])
    left = ts_substitute(fg, [h])
    right = ts_substitute(f, [ts_substitute(g, [h])])
    assert left == right
