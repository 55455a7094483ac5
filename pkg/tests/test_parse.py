from fractions import Fraction

import pytest
import sympy as sp

from oracles import Z, sym_poly
from uniqpoly.algebra.parse import ParseError, parse_poly, parse_rational_function, parse_scalar
from uniqpoly.algebra.poly import Poly, render_poly
from uniqpoly.corpus import EX4_1, EX4_2, EX4_3, EX4_4, EX4_6, EX4_7_P1, EX4_7_P2


def _expr(p):
    return sym_poly(p).as_expr()


@pytest.mark.parametrize("text, want", [
    ("2z^2 + 3z - 1", 2 * Z ** 2 + 3 * Z - 1),
    ("3(z+1)^2", 3 * (Z + 1) ** 2),
    ("z**3/4", Z ** 3 / 4),
    ("i sqrt(95) z", sp.I * sp.sqrt(95) * Z),
    ("-(z - 1)(z + 1)", -(Z - 1) * (Z + 1)),
    ("sqrt(19/5) z", sp.sqrt(sp.Rational(19, 5)) * Z),
    ("sqrt(8) + sqrt(2)", 3 * sp.sqrt(2)),
    ("(z^2 + 1)/(z^2 + 1)", sp.Integer(1)),
])
def test_parse_matches_sympy(text, want):
    assert sp.expand(_expr(parse_poly(text)) - want) == 0


def test_field_is_shrunk_to_coefficients():
    assert parse_poly("z^2 + 1").field.is_rational
    assert parse_poly("z + sqrt(4)").field.is_rational
    assert parse_poly("i sqrt(2) z").field.degree == 2  # only sqrt(-2) is needed
    assert parse_poly(EX4_6).field.degree == 2


@pytest.mark.parametrize("text", [
    "1.5 z", "z +", "(z + 1", "z^-1", "w + 1", "sqrt(-2)", "z / (z - 1)", "1/0", "sqrt(z)", "",
])
def test_bad_input_raises(text):
    with pytest.raises(ParseError):
        parse_poly(text)


@pytest.mark.parametrize("src", [EX4_1, EX4_2, EX4_3, EX4_4, EX4_6, EX4_7_P1, EX4_7_P2])
def test_render_round_trip(src):
    p = parse_poly(src)
    assert parse_poly(render_poly(p)) == p
    assert parse_poly(str(p)) == p


def test_degree_of_examples():
    assert [parse_poly(s).degree for s in (EX4_1, EX4_2, EX4_3, EX4_4, EX4_6, EX4_7_P1, EX4_7_P2)] \
        == [6, 7, 7, 6, 6, 14, 19]


def test_rational_function_in_u():
    rf = parse_rational_function("(u^2 - 1)/(2u^2 - 2u)")
    assert rf.num == Poly([Fraction(1, 2), Fraction(1, 2)], var="u")
    assert rf.den == Poly([0, 1], var="u")
    assert rf.var == "u"


def test_parse_scalar():
    assert parse_scalar("3/4") == Fraction(3, 4)
    with pytest.raises(ParseError):
        parse_scalar("z")
