import random
from fractions import Fraction

import pytest
import sympy as sp

from oracles import sym_scalar
from uniqpoly.algebra.field import (QQ, FieldMismatchError, move_to_subfield,
                                    multiquadratic_field, render_scalar, sqrt_in_field,
                                    subfield_for, to_mq)
from uniqpoly.algebra.parse import parse_scalar

K = multiquadratic_field([-1, 2, 3])


def _random_element(rng, field=K):
    x = field(0)
    for r in (1, -1, 2, 3, -2, 6, -6, -3):
        x = x + sqrt_in_field(field, r) * Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return x


def _same(x, expr) -> bool:
    return sp.expand(sp.radsimp(sym_scalar(x) - expr)) == 0


def test_field_degree_and_radicands():
    assert K.degree == 8
    assert sorted(K.mq.radicands) == [-1, 2, 3]
    assert multiquadratic_field([2, 3, 6]).degree == 4
    assert multiquadratic_field([]) is QQ


@pytest.mark.parametrize("r", [-1, 2, 3, -2, 6, -6, Fraction(1, 2), Fraction(-27, 4), 12])
def test_sqrt_in_field_matches_principal_branch(r):
    s = sqrt_in_field(K, r)
    assert _same(s, sp.sqrt(sp.Rational(Fraction(r).numerator, Fraction(r).denominator)))
    assert s * s == K(Fraction(r))


def test_sqrt_outside_field_raises():
    with pytest.raises(FieldMismatchError):
        sqrt_in_field(K, 5)


def test_arithmetic_agrees_with_sympy():
    rng = random.Random(11)
    for _ in range(25):
        a, b = _random_element(rng), _random_element(rng)
        sa, sb = sym_scalar(a), sym_scalar(b)
        assert _same(a + b, sa + sb)
        assert _same(a - b, sa - sb)
        assert _same(a * b, sa * sb)
        if not b.is_zero():
            # radsimp cannot always rationalize these denominators; multiply back
            assert sp.expand(sym_scalar(a / b) * sb - sa) == 0


def test_inverse_is_exact():
    rng = random.Random(5)
    for _ in range(20):
        a = _random_element(rng)
        if not a.is_zero():
            assert a * a.inverse() == K(1)


def test_render_parse_round_trip():
    rng = random.Random(2)
    for _ in range(20):
        a = _random_element(rng)
        b = parse_scalar(render_scalar(a))
        assert _same(b, sym_scalar(a))


def test_subfield_and_move():
    x = sqrt_in_field(K, 6) * 3 + 1
    sub = subfield_for([x])
    assert sub.degree == 2 and tuple(sub.mq.radicands) == (6,)
    y = move_to_subfield(x, sub)
    assert _same(y, 1 + 3 * sp.sqrt(6))
    z = move_to_subfield(sqrt_in_field(K, -6), multiquadratic_field([-6]))
    assert _same(z, sp.I * sp.sqrt(6))


def test_to_mq_of_rational():
    assert to_mq(K(Fraction(3, 4))) == {0: Fraction(3, 4)}
    assert to_mq(QQ(0)) == {}


def test_embedding_contains_value():
    rng = random.Random(8)
    for _ in range(10):
        a = _random_element(rng)
        ball = a.embed(200)
        v = complex(sp.N(sym_scalar(a), 30))
        assert abs(ball.mid - v) <= float(ball.radius) + 1e-25


def test_mixed_field_operation_raises():
    with pytest.raises(FieldMismatchError):
        parse_scalar("sqrt(2)") * parse_scalar("sqrt(5)")
