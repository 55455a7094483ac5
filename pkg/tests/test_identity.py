import random
from fractions import Fraction

import pytest

from uniqpoly.algebra.parse import parse_poly, parse_rational_function
from uniqpoly.algebra.poly import eval_poly
from uniqpoly.identity import tt8_polynomial, tt8_witness, verify_pair


def R(text):
    return parse_rational_function(text)


def test_verify_pair_basic():
    assert verify_pair(parse_poly("z^2"), R("u"), R("-u")).holds
    assert not verify_pair(parse_poly("z^3"), R("u"), R("-u")).holds
    same = verify_pair(parse_poly("z^2"), R("u"), R("u"))
    assert same.holds and not same.distinct and not same


@pytest.mark.parametrize("a", [1, 2, -3])
def test_quintic_witness(a):
    w = tt8_witness(a)
    chk = verify_pair(w.P, w.f, w.g)
    assert chk.holds and chk.distinct
    assert chk.numerator_degree <= 45
    assert w.P == tt8_polynomial(a, 0)
    assert w.g == w.f * R("u^2")


def _agrees_at_random_points(P, f, g, rng, count=20):
    """Numeric pre-filter: P(f(x)) = P(g(x)) at random rational points."""
    hits = 0
    while hits < count:
        x = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        try:
            fx, gx = f(x), g(x)
        except ZeroDivisionError:
            continue
        if eval_poly(P, fx) != eval_poly(P, gx):
            return False
        hits += 1
    return True


def test_pointwise_prefilter_agrees_with_symbolic_check():
    rng = random.Random(21)
    cases = [(tt8_witness(2).P, tt8_witness(2).f, tt8_witness(2).g),
             (parse_poly("z^2 + z"), R("u"), R("-u - 1")),
             (parse_poly("z^3"), R("u"), R("u + 1")),
             (parse_poly("z^4 - z^2"), R("1/u"), R("-1/u"))]
    for P, f, g in cases:
        assert _agrees_at_random_points(P, f, g, rng) == verify_pair(P, f, g).holds


def test_witness_with_constant_term_and_json():
    w = tt8_witness(Fraction(1, 2), 7)
    assert verify_pair(w.P, w.f, w.g)
    doc = w.to_json()
    assert doc["variable"] == "u" and parse_poly(doc["P"]) == w.P
    assert parse_rational_function(doc["f"]) == w.f


def test_constant_term_cancels():
    w = tt8_witness(1, 5)
    assert verify_pair(w.P, w.f, w.g)
    assert w.P == tt8_polynomial(1, 5) and w.f == tt8_witness(1, 0).f


def test_witness_rejects_a_zero():
    with pytest.raises(ValueError):
        tt8_witness(0)
