"""Reduced quotients of polynomials and composition P(R)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .field import ExactScalar
from .poly import Poly, eval_poly, poly_gcd

__all__ = ["RationalFunction", "Unreduced", "compose_rational", "compose_unreduced",
           "difference_terms", "difference_unreduced"]


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic; reduced on construction."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly([1], num.field, num.var)
        num, den = num._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = Poly([], num.field, num.var)
            self.den = Poly([1], num.field, num.var)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        lc = den.lc
        if lc != 1:
            inv = lc.inverse()
            num = num.scale(inv)
            den = den.scale(inv)
        self.num = num
        self.den = den

    @property
    def var(self) -> str:
        return self.num.var

    @property
    def field(self):
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (Poly, int, Fraction, ExactScalar)):
            other = RationalFunction(other if isinstance(other, Poly) else Poly([other], None, self.var))
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction, ExactScalar)):
            return RationalFunction(Poly([other], None, self.var))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _combine(self, o, 1)[0]

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _combine(self, o, -1)[0]

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den ** (-k), self.num ** (-k))
        return RationalFunction(self.num ** k, self.den ** k)

    def __call__(self, x):
        d = eval_poly(self.den, x)
        if isinstance(d, ExactScalar) and d.is_zero():
            raise ZeroDivisionError("evaluation at a pole")
        return eval_poly(self.num, x) / d


@dataclass(frozen=True)
class Unreduced:
    """Numerator and denominator exactly as produced, before gcd cancellation."""

    num: Poly
    den: Poly

    def reduce(self) -> RationalFunction:
        return RationalFunction(self.num, self.den)


def _combine(a: RationalFunction, b: RationalFunction, sign: int):
    """a + sign*b over the least common denominator.

    Returns the reduced result and the unreduced numerator/denominator.
    """
    g = poly_gcd(a.den, b.den)
    ca = b.den.exact_div(g)
    cb = a.den.exact_div(g)
    num = a.num * ca + b.num * cb * sign
    den = a.den * ca
    return RationalFunction(num, den), Unreduced(num, den)


def compose_unreduced(P: Poly, R: RationalFunction) -> Unreduced:
    """P(N/D) written as (sum c_k N^k D^(n-k)) / D^n, without cancellation."""
    n = P.degree
    N, D = R.num, R.den
    if n < 0:
        return Unreduced(Poly([], R.field, R.var), Poly([1], R.field, R.var))
    npow = [Poly([1], R.field, R.var)]
    dpow = [Poly([1], R.field, R.var)]
    for _ in range(n):
        npow.append(npow[-1] * N)
        dpow.append(dpow[-1] * D)
    num = Poly([], R.field, R.var)
    for k, c in enumerate(P.coeffs):
        if not c.is_zero():
            num = num + (npow[k] * dpow[n - k]).scale(c)
    return Unreduced(num, dpow[n])


def compose_rational(P: Poly, R: RationalFunction) -> RationalFunction:
    """The reduced rational function P(R)."""
    return compose_unreduced(P, R).reduce()


def difference_unreduced(P: Poly, f: RationalFunction, g: RationalFunction) -> Unreduced:
    """P(f) - P(g) over the least common denominator of the two compositions."""
    tf, tg, den = difference_terms(P, f, g)
    return Unreduced(tf - tg, den)


def difference_terms(P: Poly, f: RationalFunction, g: RationalFunction):
    """The two numerators of P(f) and P(g) lifted to their common denominator.

    Returns ``(num_f, num_g, den)``; P(f) - P(g) = (num_f - num_g) / den.
    """
    pf = compose_unreduced(P, f)
    pg = compose_unreduced(P, g)
    gd = poly_gcd(pf.den, pg.den)
    ca = pg.den.exact_div(gd)
    cb = pf.den.exact_div(gd)
    return pf.num * ca, pg.num * cb, pf.den * ca
