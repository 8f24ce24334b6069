import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsfield.derivation import DerivationContext, canonical_derivation, canonical_group_derivation, trivial_derivation
from hsfield.fields import field
from hsfield.formal_group import BUILTINS, builtin_dims, fgl_builtin
from hsfield.poly import MultiPoly
from hsfield.prolongation import AffineVariety
from hsfield.ratfunc import RationalFunction
from hsfield.rings import FractionField
from hsfield.textio import (
    ParseError,
    format_derivation,
    format_record,
    format_variety,
    parse_derivation,
    parse_element,
    parse_header,
    parse_poly,
    parse_rational,
    parse_record,
    parse_series,
    parse_variety,
    v_names,
)
from hsfield.trunc import TruncSpace

from strategies import polys

F2, F3, F4 = field(2, 1), field(3, 1), field(2, 2)


def test_parse_poly_examples():
    x = MultiPoly.variable(F3, 2, 0)
    y = MultiPoly.variable(F3, 2, 1)
    assert parse_poly("x^2*y + 2 x - 1", F3, ["x", "y"]) == x * x * y + x.scale(2) - MultiPoly.one(F3, 2)
    assert parse_poly("(x + y)^3", F3, ["x", "y"]) == x**3 + y**3
    assert parse_poly("0", F3, ["x", "y"]).is_zero()
    assert parse_poly("g*x", F4, ["x"]) == MultiPoly.variable(F4, 1, 0).scale(F4.generator())


def test_parse_rational_examples():
    t = RationalFunction.variable(F2, 1, 0)
    assert parse_rational("1/(t + 1)", F2, ["t"]) == RationalFunction.constant(F2, 1, 1) / (t + 1)
    assert parse_rational("t^-2", F2, ["t"]) == RationalFunction.constant(F2, 1, 1) / (t * t)


@pytest.mark.parametrize("text", ["x +", "x ^ y", "z", "(x", "x/0", "1/"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse_rational(text, F2, ["x"])


def test_parse_poly_rejects_division():
    with pytest.raises(ParseError):
        parse_poly("1/x", F2, ["x"])


def test_parse_element_and_series():
    K = FractionField(F2, 1, ("t",))
    assert K.eq(parse_element("t^2 + 1", K), K.add(K.mul(K.gen(0), K.gen(0)), K.one))
    S = TruncSpace(K, 2, 2, 1)
    s = parse_series("t + v + t*v^3", S, ["t"])
    assert s.format(["v"]) == "t + v + t*v^3"
    assert parse_series("v^4", S, ["t"]).is_zero()  # v^(p^m) = 0 in the truncated ring
    with pytest.raises(ParseError):
        parse_series("1/v", S, ["t"])
    assert v_names(1) == ["v"] and v_names(2) == ["v1", "v2"]


def test_header():
    assert parse_header("p=2 n=1 gens=s,t") == {"p": "2", "n": "1", "gens": "s,t"}
    with pytest.raises(ParseError):
        parse_header("p=2 oops")


@pytest.mark.parametrize("name,e", [(n, e) for n in BUILTINS for e in builtin_dims(n)])
@pytest.mark.parametrize("kind", ["polynomial", "rational"])
def test_derivation_round_trip(name, e, kind):
    for p in (2, 3):
        D = canonical_group_derivation(fgl_builtin(name, p, e), 2, kind=kind)
        back = parse_derivation(format_derivation(D))
        assert back.images == D.images
        assert back.context.gens == D.context.gens and back.context.kind == kind


def test_series_derivation_round_trip():
    D = canonical_derivation(fgl_builtin("multiplicative", 2), 1, precision=8)
    text = format_derivation(D)
    assert "precision=8" in text.splitlines()[0]
    assert parse_derivation(text).images == D.images


def test_trivial_derivation_round_trip():
    D = trivial_derivation(DerivationContext(F3, ("s", "t"), "rational", 1, 1))
    assert parse_derivation(format_derivation(D)).images == D.images


def test_derivation_parse_errors():
    with pytest.raises(ParseError):
        parse_derivation("p=2 n=1 m=1 e=1 kind=rational gens=t\n")
    with pytest.raises(ParseError):
        parse_derivation("p=2 n=1 m=1 e=1 kind=rational gens=t\ngen s -> s\n")
    with pytest.raises((ParseError, ValueError)):
        parse_derivation("p=4 n=1 m=1 e=1 kind=rational gens=t\ngen t -> t\n")


def test_variety_round_trip():
    f = MultiPoly.variable(F2, 3, 2) - MultiPoly.variable(F2, 3, 0)
    V = AffineVariety(2, (f, MultiPoly.variable(F2, 3, 1) ** 2), ("t",), "", ("x", "y"))
    back, K = parse_variety(format_variety(V, 2))
    assert K == F2 and back == V and back.coord_names == ("x", "y")
    A, _ = parse_variety("p=2 n=1 params= vars=x\n")
    assert A.arity == 1 and A.generators == ()


@settings(max_examples=200)
@given(st.data())
def test_poly_format_parse_round_trip(data):
    K = data.draw(st.sampled_from([F2, F3, F4]))
    f = data.draw(polys(K, 2, 4))
    names = ["a", "b"]
    assert parse_poly(f.format(names), K, names) == f


values = st.one_of(st.integers(-5, 100).map(str), st.text(st.characters(codec="utf-8", exclude_categories=("Cs", "Cc")), max_size=12))


@settings(max_examples=300)
@given(st.dictionaries(st.from_regex(r"[a-z][a-z_0-9]{0,6}", fullmatch=True), values, max_size=5))
def test_record_round_trip(pairs):
    assert parse_record(format_record(pairs)) == pairs
