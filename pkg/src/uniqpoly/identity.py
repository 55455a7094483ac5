"""Symbolic checks of P(f) = P(g) for rational functions, and the quintic witness."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra.field import ExactScalar, QQ
from .algebra.poly import Poly
from .algebra.ratfunc import RationalFunction, difference_terms

__all__ = ["PairCheck", "WitnessPair", "verify_pair", "tt8_witness", "tt8_polynomial"]


@dataclass(frozen=True)
class PairCheck:
    holds: bool
    distinct: bool
    # degree in the variable of the numerators of P(f), P(g) lifted to a common
    # denominator, i.e. before the subtraction and any cancellation
    numerator_degree: int

    def __bool__(self) -> bool:
        return self.holds and self.distinct


@dataclass(frozen=True)
class WitnessPair:
    P: Poly
    f: RationalFunction
    g: RationalFunction
    note: str

    def to_json(self) -> dict:
        return {"P": str(self.P), "f": str(self.f), "g": str(self.g),
                "variable": self.f.var, "note": self.note}


def verify_pair(P: Poly, f: RationalFunction, g: RationalFunction) -> PairCheck:
    """Decide exactly whether P(f) = P(g) and whether f and g differ."""
    tf, tg, den = difference_terms(P, f, g)
    holds = (tf - tg).is_zero()
    distinct = not (f - g).is_zero()
    return PairCheck(holds, distinct, max(tf.degree, tg.degree))


def _as_scalar(x) -> ExactScalar:
    return x if isinstance(x, ExactScalar) else QQ(Fraction(x))


def tt8_polynomial(a, c) -> Poly:
    """z^5 + a z^4 + (a^2/4) z^3 + c."""
    a = _as_scalar(a)
    c = _as_scalar(c)
    zero = a * 0
    return Poly([c, zero, zero, a * a / 4, a, 1])


def tt8_witness(a, c=0) -> WitnessPair:
    """Distinct f, g with P(f) = P(g) for P = z^5 + a z^4 + (a^2/4) z^3 + c.

    In the variable u (standing for e^z),
    f = -a (u^3 + (u^2+1)(u^4+1)) / (2 (u^2+u^4+u^6+u^8+1)) and g = u^2 f.
    The pair is verified symbolically before it is returned.
    """
    a = _as_scalar(a)
    if a.is_zero():
        raise ValueError("the witness degenerates to f = g = 0 when a = 0")
    P = tt8_polynomial(a, c)
    field = P.field
    u = Poly([0, 1], field, "u")
    one = Poly([1], field, "u")
    num = (u ** 3 + (u ** 2 + one) * (u ** 4 + one)).scale(-a)
    den = (u ** 2 + u ** 4 + u ** 6 + u ** 8 + one).scale(2)
    f = RationalFunction(num, den)
    g = f * RationalFunction(u ** 2)
    check = verify_pair(P, f, g)
    if not check:
        raise AssertionError("quintic witness failed verification")
    return WitnessPair(P, f, g, "closed-form quintic witness; u stands for exp(z)")
